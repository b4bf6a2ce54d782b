"""Explicit 8-dimensional matrix model of the A2 diagram flip on sl3.

The shared independent oracle for the twining character checks: weight
basis, the pinned Lie-algebra involution theta(X) = -J X^T J, and the
normalized module operator -theta.
"""

from fractions import Fraction

from rootfold.linalg import mat_mul, mat_transpose

def _gl3_basis():
    def E(i, j):
        return tuple(tuple(1 if (a, b) == (i, j) else 0 for b in range(3))
                     for a in range(3))
    return E


def _sl3_weight_basis():
    """Basis of sl3 graded by weights of the dual torus (coroot coordinates
    of the simply connected A2 datum: alpha1^vee = (1,0), alpha2^vee = (0,1))."""
    E = _gl3_basis()
    basis = {
        (1, 0): [E(0, 1)], (0, 1): [E(1, 2)], (1, 1): [E(0, 2)],
        (-1, 0): [E(1, 0)], (0, -1): [E(2, 1)], (-1, -1): [E(2, 0)],
        (0, 0): [tuple(tuple({(0, 0): 1, (1, 1): -1}.get((a, b), 0)
                             for b in range(3)) for a in range(3)),
                 tuple(tuple({(1, 1): 1, (2, 2): -1}.get((a, b), 0)
                             for b in range(3)) for a in range(3))],
    }
    return basis


def _pinned_involution():
    """theta(X) = -J X^T J with J = antidiag(1, -1, 1): the pinned outer
    automorphism of sl3 (theta(E_12) = E_23)."""
    J = ((0, 0, 1), (0, -1, 0), (1, 0, 0))

    def theta(X):
        Xt = mat_transpose(X)
        return tuple(tuple(-x for x in row) for row in mat_mul(mat_mul(J, Xt), J))

    return theta


def _mat_scale_add(mats, coeffs):
    out = [[Fraction(0)] * 3 for _ in range(3)]
    for m, c in zip(mats, coeffs):
        for a in range(3):
            for b in range(3):
                out[a][b] += c * m[a][b]
    return tuple(tuple(row) for row in out)


