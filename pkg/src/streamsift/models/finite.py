"""Exact-Bayes oracle over an explicitly enumerated finite hypothesis set.

The "posterior samples" here are the complete hypothesis set with explicit
weights, so likelihood reweighting is exactly Bayesian updating. Inputs must
lie on the model's finite grid; each hypothesis is a table of conditional
predictives over that grid.
"""

import numpy as np

from ..errors import DegenerateEvidenceError, GridLookupError, ValidationError
from ..prob import SUM_ATOL
from .base import Model

# matching tolerance for grid lookups
GRID_ATOL = 1e-9


class FiniteHypothesisModel(Model):
    def __init__(self, grid, tables, prior_weights=None):
        """
        Parameters
        ----------
        grid : (G, D) array of the admissible inputs.
        tables : (J, G, C) array; tables[j, g] = p(y | grid[g], hypothesis j).
        prior_weights : (J,) prior mass per hypothesis; uniform if omitted.
        """
        self.grid = np.asarray(grid, dtype=float)
        if self.grid.ndim == 1:
            self.grid = self.grid[:, None]
        self.tables = np.asarray(tables, dtype=float)
        if self.tables.ndim != 3 or self.tables.shape[1] != self.grid.shape[0]:
            raise ValidationError(
                f"tables must be (J, G, C) with G={self.grid.shape[0]}, "
                f"got {self.tables.shape}"
            )
        if self.tables.shape[2] < 2:
            raise ValidationError("need at least 2 classes")
        if np.any(self.tables < 0):
            raise ValidationError("conditional tables must be non-negative")
        if np.any(np.abs(self.tables.sum(axis=2) - 1.0) > SUM_ATOL):
            raise ValidationError("every table row must sum to 1")
        J = self.tables.shape[0]
        if prior_weights is None:
            prior = np.full(J, 1.0 / J)
        else:
            prior = np.asarray(prior_weights, dtype=float)
            if prior.shape != (J,) or np.any(prior < 0):
                raise ValidationError("prior weights must be J non-negative reals")
            if abs(prior.sum() - 1.0) > SUM_ATOL:
                raise ValidationError("prior weights must sum to 1")
        self.prior = prior
        self.posterior = prior.copy()
        self.num_classes = self.tables.shape[2]
        self.num_samples = J

    def grid_index(self, x):
        x = np.asarray(x, dtype=float)
        hits = np.flatnonzero(np.all(np.abs(self.grid - x) <= GRID_ATOL, axis=1))
        if hits.size == 0:
            raise GridLookupError(f"input {x.tolist()} is not on the model grid")
        return int(hits[0])

    def fit(self, examples):
        """Reset to the prior, then update exactly on each example in turn."""
        w = self.prior.copy()
        for ex in examples:
            g = self.grid_index(ex.features)
            w = w * self.tables[:, g, ex.label]
            total = w.sum()
            if total <= 0.0:
                raise DegenerateEvidenceError(
                    f"label {ex.label} at {ex.features.tolist()} has zero "
                    "likelihood under every hypothesis"
                )
            w = w / total
        self.posterior = w
        return self

    @property
    def sample_weights(self):
        return self.posterior

    def conditionals(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        idx = np.array([self.grid_index(x) for x in X], dtype=int)
        # tables is (J, G, C); gather to (N, J, C)
        return self.tables[:, idx, :].transpose(1, 0, 2)
