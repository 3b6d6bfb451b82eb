"""Bootstrap ensemble of from-scratch decision trees.

Each tree is grown on an independent bootstrap resample; its conditional
predictive at an input is the Laplace-smoothed class frequency of the leaf
the input falls into. Smoothing keeps every leaf probability strictly
positive so that likelihood reweighting never degenerates.
"""

import numpy as np

from ..errors import FitError, ValidationError
from .base import Model, dataset_arrays


def _gini(counts):
    """Gini impurity of rows of class counts, shape (..., C)."""
    n = counts.sum(axis=-1, keepdims=True)
    with np.errstate(invalid="ignore", divide="ignore"):
        p = np.where(n > 0, counts / np.maximum(n, 1), 0.0)
    return 1.0 - (p * p).sum(axis=-1)


class _Tree:
    """Array-backed binary decision tree for class-distribution prediction."""

    def __init__(self, num_classes, max_depth, min_leaf, beta):
        self.num_classes = num_classes
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.beta = beta
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.dist = []

    def _leaf_dist(self, y):
        counts = np.bincount(y, minlength=self.num_classes).astype(float)
        return (counts + self.beta) / (len(y) + self.beta * self.num_classes)

    def _new_node(self):
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        self.dist.append(None)
        return len(self.feature) - 1

    def _best_split(self, X, y):
        """Lowest weighted-Gini split; ties go to the lowest feature then
        lowest threshold. Returns None when no split respects min_leaf or
        all feature values coincide. All features are scored in one pass."""
        n, d = X.shape
        pos = np.arange(self.min_leaf, n - self.min_leaf + 1)
        if pos.size == 0:
            return None
        onehot = np.zeros((n, self.num_classes))
        onehot[np.arange(n), y] = 1.0
        order = np.argsort(X, axis=0, kind="stable")  # (n, d)
        xs = np.take_along_axis(X, order, axis=0)
        left = np.cumsum(onehot[order], axis=0)  # (n, d, C)
        total = left[-1]
        valid = xs[pos] > xs[pos - 1]  # (P, d)
        if not valid.any():
            return None
        lc = left[pos - 1]  # (P, d, C)
        rc = total[None, :, :] - lc
        nl = pos.astype(float)[:, None]
        score = (nl * _gini(lc) + (n - nl) * _gini(rc)) / n  # (P, d)
        score[~valid] = np.inf
        # feature-major flattening makes argmin tie-break to the lowest
        # feature first, then the lowest threshold within it
        flat = int(np.argmin(score.T))
        feat, i = divmod(flat, score.shape[0])
        return (
            float(score[i, feat]),
            int(feat),
            0.5 * (xs[pos[i] - 1, feat] + xs[pos[i], feat]),
        )

    def fit(self, X, y):
        self.feature, self.threshold = [], []
        self.left, self.right, self.dist = [], [], []
        self._grow(X, y, depth=0)
        self.feature = np.array(self.feature)
        self.threshold = np.array(self.threshold)
        self.left = np.array(self.left)
        self.right = np.array(self.right)
        self.dist = np.stack([d if d is not None else np.zeros(self.num_classes)
                              for d in self.dist])
        return self

    def _grow(self, X, y, depth):
        node = self._new_node()
        pure = np.all(y == y[0])
        if depth >= self.max_depth or pure or len(y) < 2 * self.min_leaf:
            self.dist[node] = self._leaf_dist(y)
            return node
        split = self._best_split(X, y)
        if split is None:
            self.dist[node] = self._leaf_dist(y)
            return node
        _, feat, thr = split
        mask = X[:, feat] <= thr
        self.feature[node] = feat
        self.threshold[node] = thr
        self.left[node] = self._grow(X[mask], y[mask], depth + 1)
        self.right[node] = self._grow(X[~mask], y[~mask], depth + 1)
        return node

    def predict_dist(self, X):
        """Leaf class distributions for a batch, shape (N, C)."""
        node = np.zeros(len(X), dtype=int)
        active = self.feature[node] >= 0
        while np.any(active):
            idx = node[active]
            go_left = X[active, self.feature[idx]] <= self.threshold[idx]
            node[active] = np.where(go_left, self.left[idx], self.right[idx])
            active = self.feature[node] >= 0
        return self.dist[node]


class BootstrapForest(Model):
    def __init__(self, num_classes, num_trees=20, max_depth=6, min_leaf=1,
                 beta=1.0, seed=0):
        if num_classes < 2:
            raise ValidationError("need at least 2 classes")
        if beta <= 0:
            raise ValidationError("leaf smoothing beta must be positive")
        if min_leaf < 1:
            raise ValidationError("min_leaf must be >= 1")
        self.num_classes = int(num_classes)
        self.num_samples = int(num_trees)
        self.max_depth = int(max_depth)
        self.min_leaf = int(min_leaf)
        self.beta = float(beta)
        self.seed = int(seed)
        self._rng = np.random.default_rng(np.random.SeedSequence([seed]))
        self.trees = None

    def fit(self, examples):
        X, y = dataset_arrays(examples)
        if len(examples) == 0:
            raise FitError("cannot fit a forest on an empty training set")
        if np.any(y >= self.num_classes):
            raise FitError(f"label {y.max()} out of range for C={self.num_classes}")
        n = len(examples)
        self.trees = []
        for _ in range(self.num_samples):
            idx = self._rng.integers(0, n, size=n)
            tree = _Tree(self.num_classes, self.max_depth, self.min_leaf, self.beta)
            tree.fit(X[idx], y[idx])
            self.trees.append(tree)
        return self

    def conditionals(self, X):
        if self.trees is None:
            raise FitError("model is not fitted")
        X = np.asarray(X, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        per_tree = np.stack([t.predict_dist(X) for t in self.trees])  # (K, N, C)
        return per_tree.transpose(1, 0, 2)
