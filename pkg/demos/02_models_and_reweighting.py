"""Posterior-sample ensembles and add-one-in likelihood reweighting.

The finite-hypothesis model enumerates its whole hypothesis space, so
reweighting the ensemble on an observation IS an exact Bayesian update; the
Dirichlet histogram model checks the Monte Carlo picture against its
conjugate closed forms.
"""

import numpy as np

from streamsift import (
    DirichletHistogramClassifier,
    FiniteHypothesisModel,
    LabelledExample,
)

print("== exact Bayes by enumeration ==")
grid = [[0.0], [1.0]]
tables = [
    [[0.9, 0.1], [0.8, 0.2]],   # hypothesis A
    [[0.1, 0.9], [0.3, 0.7]],   # hypothesis B
]
model = FiniteHypothesisModel(grid, tables)
model.fit([])
print("prior weights:", model.sample_weights)
print("prior predictive at x*=1:", model.marginal_predict([1.0]).probs)

updated = model.posterior_predictive_after_update([0.0], 0, [1.0])
print("after implicitly updating on (x=0, y=0):", updated.probs)

explicit = FiniteHypothesisModel(grid, tables)
explicit.fit([LabelledExample([0.0], 0)])
print("after an explicit refit on the same pair: ",
      explicit.marginal_predict([1.0]).probs)

print("\n== conjugate Dirichlet histogram ==")
d = DirichletHistogramClassifier(2, [0.0], [1.0], bins_per_dim=1,
                                 num_samples=10000, seed=0)
d.fit([LabelledExample([0.5], 0)])
print("exact predictive (rule of succession):", d.exact_posterior_predictive([0.5]))
print("Monte Carlo marginal with K=10000:   ", d.marginal_predict([0.5]).probs)
print("exact parameter-space KL of one more observation:",
      f"{d.parameter_kl_of_update([0.5], 0):.6f}")

implicit = d.posterior_predictive_after_update([0.5], 0, [0.5]).probs
exact = d.exact_updated_predictive([0.5], 0)
print("implicit (reweighted) update:", np.round(implicit, 4),
      "vs exact conjugate update:", np.round(exact, 4))
