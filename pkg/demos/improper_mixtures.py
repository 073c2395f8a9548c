"""Reduced states of entangled systems and why their mixtures are improper.

Walks through the Hilbert-space side of the story:
  * biorthogonal (Schmidt) decomposition of a bipartite vector,
  * partial trace and the purity of the reduction,
  * many different convex decompositions of one density operator,
  * nonunitary reduced dynamics under an entangling unitary.

Run: python3 demos/improper_mixtures.py
"""

import numpy as np

from subentity_lab.hilbert import (
    DensityOperator,
    decompositions_sample,
    partial_trace,
    purity,
    reduced_evolution,
    schmidt,
)


def ket(*amps):
    v = np.array(amps, dtype=complex)
    return v / np.linalg.norm(v)


def main():
    psi = np.sqrt(1 / 3) * ket(1, 0, 0, 0) + np.sqrt(2 / 3) * ket(0, 0, 0, 1)
    print("bipartite vector sqrt(1/3)|00> + sqrt(2/3)|11>")
    form = schmidt(psi, 2, 2)
    print(f"  Schmidt rank {form.rank}, coefficients {np.round(form.coefficients, 6)}")

    W = DensityOperator(np.outer(psi, psi.conj()))
    red = partial_trace(W, 2, 2, keep="A")
    print(f"  reduced operator diag {np.round(np.diag(red.matrix).real, 6)}, "
          f"purity {purity(red):.6f}")

    print("\nthree convex decompositions of the same reduced operator")
    for k, terms in enumerate(decompositions_sample(red, 2, 3, seed=5)):
        ws = " ".join(f"{q:.4f}" for q, _ in terms)
        print(f"  sample {k}: weights {ws}")
    print("  all reconstruct the same W; no sample's weights carry an")
    print("  ignorance interpretation, because W came from a partial trace")

    print("\nreduced dynamics under the controlled bit flip")
    cnot = np.eye(4)[[0, 1, 3, 2]].astype(complex)
    plus_zero = np.kron(ket(1, 1), ket(1, 0))
    before, after = reduced_evolution(plus_zero, cnot, 2, 2)
    print(f"  purity of the first factor: {before:.3f} -> {after:.3f}")
    print("  the reduction evolves nonunitarily although the whole is unitary")


if __name__ == "__main__":
    main()
