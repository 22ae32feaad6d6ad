"""Build the q=5 Mordell-Weil lattice from the explicit points and inspect it.

Prints the LLL-reduced Gram matrix, the E8 verdict, the number of minimal
vectors among small combinations, and an upper-triangular embedding in R^8.
"""

import itertools

import numpy as np

from mwlattice.bounds import e1_lattice
from mwlattice.ecff import CurveE1Params
from mwlattice.lattice import euclidean_embedding, is_e8, lll_reduce, shortest_vector


def main():
    basis = e1_lattice(CurveE1Params(5, 1, 4))
    G, _ = lll_reduce(basis.gram)
    print("LLL-reduced Gram:")
    for row in G:
        print("  " + " ".join(f"{int(v):>3}" for v in row))
    print(f"rank {basis.rank}, det {basis.det}, E8: {is_e8(basis)}")
    norm, coeffs = shortest_vector(basis)
    print(f"shortest norm {norm}, witness {coeffs}")

    # E8 has 240 roots; count norm-2 vectors in a coefficient box of the reduced basis
    Gi = np.array([[int(v) for v in row] for row in G])
    X = np.array(list(itertools.product(range(-2, 3), repeat=8)))
    norms = np.einsum("ij,jk,ik->i", X, Gi, X)
    print(f"norm-2 vectors with coefficients in [-2, 2]: {int(np.sum(norms == 2))} (E8 has 240)")

    U = euclidean_embedding(basis)
    np.set_printoptions(precision=4, suppress=True, linewidth=120)
    print("embedding (rows are basis vectors):")
    print(U)


if __name__ == "__main__":
    main()
