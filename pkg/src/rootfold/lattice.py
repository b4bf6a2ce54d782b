"""Integer lattices with finite group actions.

Provides invariants, coinvariants (with torsion, in Smith normal form
coordinates), the averaging map onto the fixed subspace, and subgroups of
coinvariant lattices.  Every object is immutable after construction and all
arithmetic is exact.
"""

from __future__ import annotations

from fractions import Fraction

from .linalg import (
    frac_vec,
    hermite_row_basis,
    identity_matrix,
    kernel_basis,
    lattice_member,
    mat_integer_inverse,
    mat_mul,
    mat_sub,
    mat_vec,
    smith_normal_form,
    vec_add,
    vec_scale,
)

GROUP_CAP = 10080


class MalformedAction(ValueError):
    """A generator is not invertible over Z, or the action is inconsistent."""


class ResourceCap(RuntimeError):
    """An enumeration exceeded its configured bound."""


def group_closure(generators, cap=GROUP_CAP):
    """All elements of the group the matrices generate, by breadth-first
    multiplication.  Raises MalformedAction on a non-unimodular generator and
    ResourceCap past `cap` elements."""
    if not generators:
        return ()
    n = len(generators[0])
    for g in generators:
        try:
            mat_integer_inverse(g)
        except ValueError:
            raise MalformedAction("generator is not invertible over Z")
    seen = {identity_matrix(n)}
    frontier = [identity_matrix(n)]
    order = [identity_matrix(n)]
    while frontier:
        nxt = []
        for h in frontier:
            for g in generators:
                prod = mat_mul(g, h)
                if prod not in seen:
                    seen.add(prod)
                    nxt.append(prod)
                    order.append(prod)
                    if len(seen) > cap:
                        raise ResourceCap("group closure exceeded %d elements" % cap)
        frontier = nxt
    return tuple(order)


def orbit(v, group):
    """The orbit of a vector under a list of matrices, sorted."""
    return tuple(sorted({mat_vec(g, v) for g in group}))


def average(v, group):
    """The average of v over its orbit (divides by orbit size, not group
    order); this is the map onto the fixed subspace."""
    orb = {mat_vec(g, frac_vec(v)) for g in group} or {frac_vec(v)}
    total = (Fraction(0),) * len(v)
    for u in orb:
        total = vec_add(total, u)
    return vec_scale(Fraction(1, len(orb)), total)


def invariants(rank, generators):
    """Canonical integer basis of the fixed sublattice {x : gx = x for all g}."""
    if not generators:
        return tuple(identity_matrix(rank))
    stacked = []
    eye = identity_matrix(rank)
    for g in generators:
        stacked.extend(mat_sub(g, eye))
    return hermite_row_basis(kernel_basis(tuple(stacked)))


class CoinvariantElement:
    """Element of a coinvariant lattice: free coordinates plus residues."""

    __slots__ = ("lattice", "free", "tors")

    def __init__(self, lattice, free, tors):
        self.lattice = lattice
        self.free = tuple(int(x) for x in free)
        self.tors = tuple(t % d for t, d in zip(tors, lattice.torsion))

    def __eq__(self, other):
        return (isinstance(other, CoinvariantElement)
                and self.free == other.free and self.tors == other.tors)

    def __hash__(self):
        return hash((self.free, self.tors))

    def __add__(self, other):
        return CoinvariantElement(self.lattice,
                                  vec_add(self.free, other.free),
                                  tuple(a + b for a, b in zip(self.tors, other.tors)))

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return CoinvariantElement(self.lattice,
                                  tuple(-x for x in self.free),
                                  tuple(-t for t in self.tors))

    def scale(self, c):
        return CoinvariantElement(self.lattice,
                                  tuple(c * x for x in self.free),
                                  tuple(c * t for t in self.tors))

    def is_zero(self):
        return all(x == 0 for x in self.free) and all(t == 0 for t in self.tors)

    def flat(self):
        """Free coordinates; torsion discarded (the ♭ map)."""
        return self.free

    def __repr__(self):
        if self.tors:
            return "Coinv(free=%r, tors=%r)" % (self.free, self.tors)
        return "Coinv(free=%r)" % (self.free,)


class QuotientEndo:
    """An endomorphism of a coinvariant lattice induced by an ambient matrix."""

    __slots__ = ("lattice", "matrix")

    def __init__(self, lattice, matrix):
        self.lattice = lattice
        self.matrix = matrix  # acts on full SNF coordinates

    def __call__(self, e):
        L = self.lattice
        y = L._full_coords(e)
        z = mat_vec(self.matrix, y)
        return L._from_full(z)

    def __eq__(self, other):
        return isinstance(other, QuotientEndo) and self.matrix == other.matrix

    def __hash__(self):
        return hash(self.matrix)


class CoinvariantLattice:
    """X/<gx - x> for a finite action on X = Z^rank, in SNF coordinates.

    Coordinates: `torsion` lists the moduli d_i >= 2; elements carry an
    integer vector of free coordinates and a residue per torsion factor.
    """

    def __init__(self, rank, generators, cap=GROUP_CAP):
        self.rank = rank
        self.generators = tuple(tuple(map(tuple, g)) for g in generators)
        self.group = group_closure(self.generators, cap) or (identity_matrix(rank),)
        eye = identity_matrix(rank)
        cols = []
        for g in self.generators:
            diff = mat_sub(g, eye)
            for j in range(rank):
                cols.append(tuple(diff[i][j] for i in range(rank)))
        if cols:
            R = tuple(zip(*cols))  # rank x (rank*k), columns span the relations
        else:
            R = tuple((0,) * 1 for _ in range(rank)) if rank else ()
        D, U, _V = smith_normal_form(R) if rank else ((), (), ())
        self._U = U if rank else ()
        self._Uinv = mat_integer_inverse(U) if rank else ()
        ncols = len(R[0]) if rank and R else 0
        diag = [D[i][i] if i < ncols else 0 for i in range(rank)]
        self._moduli = tuple(diag)  # 0 = free, 1 = dead, >=2 = torsion
        self.torsion = tuple(d for d in diag if d >= 2)
        self._tors_rows = tuple(i for i, d in enumerate(diag) if d >= 2)
        self._free_rows = tuple(i for i, d in enumerate(diag) if d == 0)
        self.free_rank = len(self._free_rows)
        self._section = self._build_section()

    # -- coordinates ------------------------------------------------------

    def project(self, x):
        """Image of an ambient integer vector in the quotient."""
        y = mat_vec(self._U, x)
        free = tuple(y[i] for i in self._free_rows)
        tors = tuple(y[i] for i in self._tors_rows)
        return CoinvariantElement(self, free, tors)

    def _full_coords(self, e):
        y = [0] * self.rank
        for i, t in zip(self._tors_rows, e.tors):
            y[i] = t
        for i, u in zip(self._free_rows, e.free):
            y[i] = u
        return tuple(y)

    def _from_full(self, y):
        free = tuple(y[i] for i in self._free_rows)
        tors = tuple(y[i] for i in self._tors_rows)
        return CoinvariantElement(self, free, tors)

    def lift(self, e):
        """Canonical integer preimage of a coinvariant element."""
        return mat_vec(self._Uinv, self._full_coords(e))

    def element(self, free, tors=()):
        tors = tuple(tors) or (0,) * len(self.torsion)
        return CoinvariantElement(self, free, tors)

    def zero(self):
        return CoinvariantElement(self, (0,) * self.free_rank, (0,) * len(self.torsion))

    def _build_section(self):
        cols = []
        for i in self._free_rows:
            basis_elt = CoinvariantElement(
                self,
                tuple(1 if j == i else 0 for j in self._free_rows),
                (0,) * len(self.torsion),
            )
            cols.append(average(self.lift(basis_elt), self.group))
        return tuple(cols)

    def section_vector(self, e):
        """Rational ambient vector realizing the free part on the fixed
        subspace: the group-average of any lift.  Torsion maps to 0."""
        v = (Fraction(0),) * self.rank
        for c, col in zip(e.free, self._section):
            v = vec_add(v, vec_scale(Fraction(c), col))
        return v

    # -- induced maps ------------------------------------------------------

    def endo_from_matrix(self, M):
        """The endomorphism induced by an ambient matrix commuting with the
        action.  Raises MalformedAction if M does not descend."""
        A = mat_mul(mat_mul(self._U, M), self._Uinv)
        for j in range(self.rank):
            dj = self._moduli[j]
            if dj == 0:
                continue
            for i in range(self.rank):
                di = self._moduli[i]
                entry = A[i][j] * dj
                if di == 0:
                    ok = entry == 0
                else:
                    ok = entry % di == 0
                if not ok:
                    raise MalformedAction("matrix does not descend to the quotient")
        return QuotientEndo(self, A)

    # -- subgroups ---------------------------------------------------------

    def subgroup(self, elements):
        """Canonical form of the subgroup the elements generate."""
        return QuotientSubgroup(self, elements)


class QuotientSubgroup:
    """Subgroup of a coinvariant lattice, canonicalized by Hermite form of
    lifted generators together with the torsion relations."""

    def __init__(self, lattice, elements):
        self.lattice = lattice
        n = lattice.free_rank + len(lattice.torsion)
        rows = []
        for e in elements:
            rows.append(tuple(e.free) + tuple(e.tors))
        for k, d in enumerate(lattice.torsion):
            rows.append((0,) * lattice.free_rank
                        + tuple(d if j == k else 0 for j in range(len(lattice.torsion))))
        if not rows:
            rows = [(0,) * n] if n else [()]
        self.basis = hermite_row_basis(rows)

    def __contains__(self, e):
        v = tuple(e.free) + tuple(e.tors)
        if not self.basis:
            return all(a == 0 for a in v)
        return lattice_member(self.basis, v)

    def __eq__(self, other):
        return isinstance(other, QuotientSubgroup) and self.basis == other.basis

    def __hash__(self):
        return hash(self.basis)


def coinvariants(rank, generators, cap=GROUP_CAP):
    """Coinvariant lattice of a finite integer action, in SNF coordinates."""
    return CoinvariantLattice(rank, generators, cap)


def action_to_json(rank, generators):
    return {"rank": rank, "generators": [[list(row) for row in g] for g in generators]}


def action_from_json(data):
    rank = int(data["rank"])
    gens = tuple(tuple(tuple(int(x) for x in row) for row in g)
                 for g in data["generators"])
    for g in gens:
        if len(g) != rank or any(len(row) != rank for row in g):
            raise MalformedAction("generator shape does not match rank")
    return rank, gens
