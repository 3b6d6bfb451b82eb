"""Conjugate Dirichlet-categorical histogram classifier.

Features are binned on a uniform grid over a declared bounding box; each bin
carries an independent Dirichlet posterior over class labels. The conjugacy
gives exact predictives and an exact KL divergence between the parameter
posterior before and after one observation (only the touched bin changes).
"""

import numpy as np

from ..errors import DomainError, FitError, ValidationError
from ..prob import dirichlet_kl
from .base import Model, dataset_arrays


class DirichletHistogramClassifier(Model):
    def __init__(self, num_classes, lower, upper, bins_per_dim=4, alpha0=1.0,
                 num_samples=100, seed=0):
        if num_classes < 2:
            raise ValidationError("need at least 2 classes")
        if alpha0 <= 0:
            raise DomainError("alpha0 must be strictly positive")
        self.num_classes = int(num_classes)
        self.lower = np.atleast_1d(np.asarray(lower, dtype=float))
        self.upper = np.atleast_1d(np.asarray(upper, dtype=float))
        if self.lower.shape != self.upper.shape or np.any(self.upper <= self.lower):
            raise ValidationError("bounding box must satisfy lower < upper")
        self.bins_per_dim = int(bins_per_dim)
        if self.bins_per_dim < 1:
            raise ValidationError("bins_per_dim must be >= 1")
        self.alpha0 = float(alpha0)
        self.num_samples = int(num_samples)
        self.seed = int(seed)
        self.dim = self.lower.shape[0]
        self.num_bins = self.bins_per_dim ** self.dim
        self.concentrations = np.full((self.num_bins, self.num_classes), self.alpha0)
        self._fit_generation = 0
        self._sample_cache = {}

    def bin_index(self, x):
        """Flat bin index of an input; the upper box edge maps to the last bin."""
        x = np.atleast_1d(np.asarray(x, dtype=float))
        if x.shape != self.lower.shape:
            raise ValidationError(f"input dim {x.shape} != box dim {self.lower.shape}")
        if np.any(x < self.lower) or np.any(x > self.upper):
            raise ValidationError(
                f"input {x.tolist()} outside bounding box "
                f"[{self.lower.tolist()}, {self.upper.tolist()}]"
            )
        width = (self.upper - self.lower) / self.bins_per_dim
        per_dim = np.minimum(((x - self.lower) / width).astype(int), self.bins_per_dim - 1)
        return int(np.ravel_multi_index(per_dim, (self.bins_per_dim,) * self.dim))

    def fit(self, examples):
        """Reset every bin to the prior, then add one count per example."""
        self.concentrations = np.full((self.num_bins, self.num_classes), self.alpha0)
        X, y = dataset_arrays(examples)
        for x, label in zip(X, y):
            if label >= self.num_classes:
                raise FitError(f"label {label} out of range for C={self.num_classes}")
            self.concentrations[self.bin_index(x), label] += 1.0
        self._fit_generation += 1
        self._sample_cache = {}
        return self

    def _bin_samples(self, b):
        """K cached Dirichlet draws for bin b; deterministic per fit and seed."""
        cached = self._sample_cache.get(b)
        if cached is None:
            rng = np.random.default_rng(
                np.random.SeedSequence([self.seed, self._fit_generation, b])
            )
            cached = rng.dirichlet(self.concentrations[b], size=self.num_samples)
            self._sample_cache[b] = cached
        return cached

    def conditionals(self, X):
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        return np.stack([self._bin_samples(self.bin_index(x)) for x in X])

    # --- exact conjugate quantities -------------------------------------

    def exact_posterior_predictive(self, x):
        """Exact predictive at x: normalized concentrations of its bin."""
        alpha = self.concentrations[self.bin_index(x)]
        return alpha / alpha.sum()

    def exact_updated_predictive(self, x, y, x_star=None):
        """Exact predictive at x_star after a conjugate update on (x, y)."""
        b = self.bin_index(x)
        b_star = b if x_star is None else self.bin_index(x_star)
        alpha = self.concentrations[b_star].copy()
        if b_star == b:
            alpha[int(y)] += 1.0
        return alpha / alpha.sum()

    def parameter_kl_of_update(self, x, y):
        """KL(posterior after adding (x, y) || current posterior).

        Bins are independent, so only the touched bin contributes.
        """
        alpha = self.concentrations[self.bin_index(x)]
        alpha_post = alpha.copy()
        alpha_post[int(y)] += 1.0
        return dirichlet_kl(alpha_post, alpha)
