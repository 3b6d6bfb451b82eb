"""Deterministic seed derivation helpers.

Every stochastic component takes a plain integer seed; composite contexts
(run seed + purpose tag + step ...) are folded into one integer through a
SeedSequence so that independent purposes get independent streams.
"""

import numpy as np


def derive_seed(*parts):
    """Fold integer parts into a single derived seed, deterministically."""
    ss = np.random.SeedSequence([int(p) for p in parts])
    return int(ss.generate_state(1, dtype=np.uint64)[0])


def rng_from(*parts):
    """A Generator seeded from the given parts."""
    return np.random.default_rng(np.random.SeedSequence([int(p) for p in parts]))
