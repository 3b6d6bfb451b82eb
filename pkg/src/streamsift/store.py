"""The five stream-learning strategies as executable store policies.

Strategy semantics, per step with n incoming examples, store budget m and
offline period tau:

  A  train online on the n incoming examples; nothing stored or selected
  B  append all n; train offline on the whole store
  C  append all n; select m <= n*t offline, train offline on the selection
  D  select m <= n online, append; train offline on the whole store
  E  select m <= n online, replace into a capacity-m store; train offline
     on the store

Costs are charged through abstract unit functions (cost of storing N is N,
of selecting M from N is N, of training on N is N, all overridable); offline
actions are amortized by 1/tau. The ledger records a per-step reading of
each counter so growth rates can be checked against the strategies' symbolic
cost formulas.
"""

import numpy as np

from .errors import ConfigError

STRATEGIES = ("A", "B", "C", "D", "E")


def unit_cost(n):
    return float(n)


def unit_select_cost(m, n):
    return float(n)


class DataStore:
    """Ordered collection of retained examples with an optional capacity."""

    def __init__(self, capacity=None):
        self.examples = []
        self.capacity = capacity

    def __len__(self):
        return len(self.examples)

    def append(self, example):
        if self.capacity is not None and len(self.examples) >= self.capacity:
            raise ConfigError(f"store is at capacity {self.capacity}")
        self.examples.append(example)

    def snapshot(self):
        s = DataStore(self.capacity)
        s.examples = list(self.examples)
        return s


class CostLedger:
    """Per-step readings of storage, selection and training cost units."""

    def __init__(self, cost_store=unit_cost, cost_select=unit_select_cost,
                 cost_train=unit_cost):
        self.cost_store = cost_store
        self.cost_select = cost_select
        self.cost_train = cost_train
        self.storage_units = []
        self.selection_units = []
        self.training_units = []
        self._pending = [0.0, 0.0, 0.0]

    def charge_storage(self, stored_count):
        self._pending[0] += self.cost_store(stored_count)

    def charge_selection(self, m, n, tau=1):
        self._pending[1] += self.cost_select(m, n) / tau

    def charge_training(self, trained_count, tau=1):
        self._pending[2] += self.cost_train(trained_count) / tau

    def end_step(self):
        self.storage_units.append(self._pending[0])
        self.selection_units.append(self._pending[1])
        self.training_units.append(self._pending[2])
        self._pending = [0.0, 0.0, 0.0]

    def cumulative(self):
        return {
            "storage": np.cumsum(self.storage_units).tolist(),
            "selection": np.cumsum(self.selection_units).tolist(),
            "training": np.cumsum(self.training_units).tolist(),
        }

    def as_dict(self):
        return {
            "storage": list(self.storage_units),
            "selection": list(self.selection_units),
            "training": list(self.training_units),
        }


def replace_policy(store, incoming, seed=0):
    """Insert selected examples, evicting seeded-uniform-random residents
    while the store exceeds its capacity. Residents are the examples present
    before this call; incoming examples are never evicted."""
    capacity = store.capacity
    if capacity is not None and len(incoming) > capacity:
        raise ConfigError(
            f"incoming batch of {len(incoming)} exceeds store capacity {capacity}"
        )
    residents = list(store.examples)
    if capacity is not None:
        overflow = len(residents) + len(incoming) - capacity
        if overflow > 0:
            entropy = list(seed) if isinstance(seed, (list, tuple)) else [int(seed)]
            rng = np.random.default_rng(np.random.SeedSequence(entropy))
            evict = set(rng.choice(len(residents), size=overflow, replace=False).tolist())
            residents = [ex for i, ex in enumerate(residents) if i not in evict]
    out = DataStore(capacity)
    out.examples = residents + list(incoming)
    return out


def random_selector(seed):
    """Seeded uniform-random selector usable with :func:`apply_strategy`."""
    rng = np.random.default_rng(np.random.SeedSequence([int(seed)]))

    def select(examples, k, step):
        return sorted(rng.choice(len(examples), size=k, replace=False).tolist())

    return select


def apply_strategy(strategy, schedule, selector, m, tau=1, eviction_seed=0,
                   cost_store=unit_cost, cost_select=unit_select_cost,
                   cost_train=unit_cost):
    """Run one Table-style strategy over a schedule.

    ``selector(examples, k, step) -> indices`` picks k of the given examples
    (unused by strategies A and B). Returns the per-step store snapshots and
    the cost ledger. No model is trained here; training is an abstract
    charged event.
    """
    if strategy not in STRATEGIES:
        raise ConfigError(f"unknown strategy {strategy!r}")
    if tau < 1:
        raise ConfigError("tau must be >= 1")
    if strategy in ("C", "D", "E") and m < 1:
        raise ConfigError(f"strategy {strategy} needs a positive store budget m")

    ledger = CostLedger(cost_store, cost_select, cost_train)
    store = DataStore(capacity=m if strategy == "E" else None)
    snapshots = []

    for t, batch in enumerate(schedule.steps, start=1):
        n = len(batch)
        if strategy in ("D", "E") and m > n:
            raise ConfigError(
                f"strategy {strategy} requires m <= n; got m={m}, n={n} at step {t}"
            )
        if strategy == "A":
            ledger.charge_training(n)
        elif strategy == "B":
            for ex in batch:
                store.append(ex)
            ledger.charge_storage(len(store))
            ledger.charge_training(len(store), tau=tau)
        elif strategy == "C":
            for ex in batch:
                store.append(ex)
            if m > len(store):
                raise ConfigError(
                    f"strategy C requires m <= n*t; got m={m}, store={len(store)}"
                )
            selector(store.examples, m, t - 1)
            ledger.charge_storage(len(store))
            ledger.charge_selection(m, len(store), tau=tau)
            ledger.charge_training(m, tau=tau)
        elif strategy == "D":
            chosen = selector(batch, m, t - 1)
            for i in chosen:
                store.append(batch[i])
            ledger.charge_storage(len(store))
            ledger.charge_selection(m, n)
            ledger.charge_training(len(store), tau=tau)
        else:  # E
            chosen = selector(batch, m, t - 1)
            incoming = [batch[i] for i in chosen]
            store = replace_policy(store, incoming, seed=[eviction_seed, t])
            ledger.charge_storage(len(store))
            ledger.charge_selection(m, n)
            ledger.charge_training(len(store), tau=tau)
        ledger.end_step()
        snapshots.append(store.snapshot())
    return snapshots, ledger
