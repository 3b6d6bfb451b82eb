"""Entropy, KL divergence and mutual information in nats.

These primitives back every acquisition estimator in the package. Run as a
script to see the headline identities evaluated on small distributions.
"""

import numpy as np

from streamsift import (
    Categorical,
    dirichlet_kl,
    entropy,
    kl_divergence,
    mutual_information,
)

print("== entropy ==")
for p in ([1.0, 0.0], [0.5, 0.5], [0.25, 0.75]):
    print(f"H({p}) = {entropy(p):.6f} nats")
print(f"uniform over 4 classes reaches the ln(4) = {np.log(4):.6f} ceiling:",
      f"{entropy([0.25] * 4):.6f}")

print("\n== KL divergence ==")
print(f"KL([0.8,0.2] || [0.2,0.8]) = {kl_divergence([0.8, 0.2], [0.2, 0.8]):.6f}")
print("KL is asymmetric:",
      f"{kl_divergence([0.2, 0.8], [0.8, 0.2]):.6f} the other way")

print("\n== Dirichlet KL (closed form) ==")
print("one observation against a flat prior:",
      f"KL(Dir[2,1] || Dir[1,1]) = {dirichlet_kl([2, 1], [1, 1]):.6f}")

print("\n== mutual information ==")
independent = np.outer([0.3, 0.7], [0.6, 0.4])
print(f"independent joint: MI = {mutual_information(independent):.6f}")
correlated = [[0.4, 0.1], [0.1, 0.4]]
print(f"correlated joint {correlated}: MI = {mutual_information(correlated):.6f}")

# MI equals the KL between the joint and the product of its marginals
j = np.array([[0.35, 0.05], [0.15, 0.45]])
marg = np.outer(j.sum(axis=1), j.sum(axis=0))
print("MI == KL(joint || product of marginals):",
      f"{mutual_information(j):.9f} vs",
      f"{kl_divergence(Categorical(j.ravel()), Categorical(marg.ravel())):.9f}")
