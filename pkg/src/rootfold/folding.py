"""The four folding operations on based root systems with automorphisms.

A root system here is a finite set of exact rational vectors with a chosen
base, living in an ambient space that carries an invariant positive form.
The operations produce their output inside the fixed subspace: restriction
is realized through the averaging map, so that norms and restrictions can be
compared by literal vector equality (the duality theorem is an identity).
"""

from __future__ import annotations

from fractions import Fraction

from .lattice import MalformedAction, ResourceCap
from .linalg import (
    frac_vec,
    gauss_solve,
    mat_mul,
    mat_rational_inverse,
    mat_transpose,
    mat_vec,
    vec_add,
    vec_dot,
    vec_neg,
    vec_scale,
    vec_sub,
)

OP_TAGS = ("N", "Nprime", "res", "resprime")

_CLOSURE_CAP = 100000


def form_value(gram, u, v):
    return vec_dot(frac_vec(u), mat_vec(gram, frac_vec(v)))


def dual_vector(gram, v):
    """v^vee = 2v/(v|v) with respect to the form."""
    return vec_scale(Fraction(2) / form_value(gram, v, v), frac_vec(v))


def reflect(gram, root, v):
    """Reflection of v in the hyperplane orthogonal to `root`."""
    c = Fraction(2) * form_value(gram, root, v) / form_value(gram, root, root)
    return vec_sub(frac_vec(v), vec_scale(c, frac_vec(root)))


class RootSystemV:
    """A based root system given by exact vectors and an invariant form."""

    def __init__(self, base, gram, label=""):
        self.base = tuple(frac_vec(b) for b in base)
        self.gram = tuple(tuple(Fraction(x) for x in row) for row in gram)
        self.label = label
        self.roots = self._closure(self.base)
        self._cartan = None

    @classmethod
    def from_datum(cls, datum):
        """The character-side system (Phi, Delta) of a based root datum."""
        return cls(datum.simple_roots, datum.gram(), label=datum.label)

    @classmethod
    def dual_from_datum(cls, datum):
        """The cocharacter-side system (Phi^vee, Delta^vee) with the induced
        form (inverse Gram)."""
        return cls(datum.simple_coroots, datum.gram_star(),
                   label=datum.label + "^" if datum.label else "")

    def _closure(self, base):
        seen = set(base)
        frontier = list(base)
        while frontier:
            nxt = []
            for v in frontier:
                for b in self.base:
                    w = reflect(self.gram, b, v)
                    if w not in seen:
                        seen.add(w)
                        nxt.append(w)
                        if len(seen) > _CLOSURE_CAP:
                            raise ResourceCap("root closure exceeded cap")
            frontier = nxt
        seen |= {vec_neg(v) for v in seen}
        return tuple(sorted(seen))

    def cartan(self):
        """C[i][j] = <beta_j, beta_i^vee> = 2(b_i|b_j)/(b_i|b_i)."""
        if self._cartan is None:
            n = len(self.base)
            rows = []
            for i in range(n):
                di = form_value(self.gram, self.base[i], self.base[i])
                row = []
                for j in range(n):
                    val = Fraction(2) * form_value(self.gram, self.base[i], self.base[j]) / di
                    if val.denominator != 1:
                        raise ValueError("non-integral Cartan entry")
                    row.append(int(val))
                rows.append(tuple(row))
            self._cartan = tuple(rows)
        return self._cartan

    def classify(self):
        from .rootdata import classify_cartan
        return classify_cartan(self.cartan())

    def positive_roots(self):
        out = []
        A = mat_transpose(self.base)
        for r in self.roots:
            sol = gauss_solve(A, r)
            if sol is None:
                raise ValueError("root outside the base span")
            if all(c >= 0 for c in sol):
                out.append(r)
        return tuple(sorted(out))

    def dual(self):
        """Pointwise dual system (same ambient space and form)."""
        out = RootSystemV.__new__(RootSystemV)
        out.base = tuple(dual_vector(self.gram, b) for b in self.base)
        out.gram = self.gram
        out.label = self.label + "^"
        out.roots = tuple(sorted(dual_vector(self.gram, r) for r in self.roots))
        out._cartan = None
        return out

    def weyl_order(self, cap=2000000):
        """Order of the Weyl group, by closure over reflection matrices."""
        n = len(self.base[0])
        mats = []
        for b in self.base:
            cols = []
            for k in range(n):
                e = tuple(Fraction(1 if i == k else 0) for i in range(n))
                cols.append(reflect(self.gram, b, e))
            mats.append(mat_transpose(cols))
        seen = {tuple(tuple(Fraction(1 if i == j else 0) for j in range(n)) for i in range(n))}
        frontier = list(seen)
        while frontier:
            nxt = []
            for h in frontier:
                for g in mats:
                    p = mat_mul(g, h)
                    if p not in seen:
                        seen.add(p)
                        nxt.append(p)
                        if len(seen) > cap:
                            raise ResourceCap("Weyl closure exceeded cap")
            frontier = nxt
        return len(seen)

    def __eq__(self, other):
        return (isinstance(other, RootSystemV)
                and self.base == other.base and set(self.roots) == set(other.roots))

    def __repr__(self):
        return "RootSystemV(%s, %d roots)" % (self.label or "?", len(self.roots))


class FoldedRootSystem(RootSystemV):
    """Output of one of the four operations, with its orbit bookkeeping.

    orbits: tuple of (orbit_indices, orthogonal) per folded base element,
    where orbit_indices are positions in the source base (lowest first).
    """

    def __init__(self, base, gram, op, orbits, source_base, label=""):
        self.op = op
        self.orbits = orbits
        self.source_base = source_base
        super().__init__(base, gram, label=label)

    def type_label(self):
        """Cartan type, refined for rank-1 components: an orbit that was not
        pairwise orthogonal yields B1 under the non-doubling operations
        (N, res) and C1 under the doubling ones (Nprime, resprime)."""
        from .rootdata import _components, classify_cartan
        comps = _components(self.cartan())
        names = []
        for comp in comps:
            if len(comp) == 1 and not self.orbits[comp[0]][1]:
                letter = "B" if self.op in ("N", "res") else "C"
                names.append((1, letter, letter + "1"))
            else:
                sub = tuple(tuple(self.cartan()[i][j] for j in comp) for i in comp)
                lbl = classify_cartan(sub)
                names.append((len(comp), lbl[0], lbl))
        names.sort()
        return "x".join(nm for _, _, nm in names)


def base_orbits(rs, group):
    """Orbits of the base under a matrix group, ordered by lowest index."""
    index = {b: i for i, b in enumerate(rs.base)}
    seen = set()
    orbits = []
    for i, b in enumerate(rs.base):
        if i in seen:
            continue
        orb = set()
        for g in group:
            img = tuple(Fraction(x) for x in mat_vec(g, b))
            if img not in index:
                raise MalformedAction("action does not preserve the base")
            orb.add(index[img])
        seen |= orb
        orbits.append(tuple(sorted(orb)))
    return tuple(orbits)


def orbit_orthogonal(rs, group, alpha):
    """Whether the orbit of a simple root is pairwise orthogonal under the
    invariant form."""
    alpha = frac_vec(alpha)
    if alpha not in rs.base:
        raise ValueError("alpha is not a simple root")
    orb = sorted({tuple(Fraction(x) for x in mat_vec(g, alpha)) for g in group})
    for i in range(len(orb)):
        for j in range(i + 1, len(orb)):
            if form_value(rs.gram, orb[i], orb[j]) != 0:
                return False
    return True


def fold(rs, group, op):
    """Apply one of N, Nprime, res, resprime to a based system.

    The result lives in the fixed subspace of the same ambient space;
    restriction is computed as the orbit average (the image of res under the
    averaging identification)."""
    if op not in OP_TAGS:
        raise ValueError("unknown operation %r" % op)
    orbits = base_orbits(rs, group)
    new_base = []
    meta = []
    for orb in orbits:
        vecs = [rs.base[i] for i in orb]
        orth = all(
            form_value(rs.gram, vecs[i], vecs[j]) == 0
            for i in range(len(vecs)) for j in range(i + 1, len(vecs))
        )
        total = vecs[0]
        for v in vecs[1:]:
            total = vec_add(total, v)
        if op == "N":
            folded = total
        elif op == "Nprime":
            folded = total if orth else vec_scale(2, total)
        elif op == "res":
            folded = vec_scale(Fraction(1, len(vecs)), total)
        else:  # resprime
            avg = vec_scale(Fraction(1, len(vecs)), total)
            folded = avg if orth else vec_scale(2, avg)
        new_base.append(folded)
        meta.append((orb, orth))
    return FoldedRootSystem(new_base, rs.gram, op, tuple(meta), rs.base,
                            label="%s_%s" % (op, rs.label))


def fold_all(rs, group):
    return {op: fold(rs, group, op) for op in OP_TAGS}


def verify_duality(datum, group_char, group_cochar):
    """Check res(Phi^vee)^vee = N'(Phi) and res'(Phi^vee)^vee = N(Phi).

    Both sides are computed independently; the cocharacter side is carried
    into the character space by the form identification.  Returns a report
    dict with a list of mismatches (empty means the theorem holds here).
    """
    char = RootSystemV.from_datum(datum)
    cochar = RootSystemV.dual_from_datum(datum)
    iota = _form_identification(datum)

    mismatches = []
    for res_op, norm_op in (("res", "Nprime"), ("resprime", "N")):
        lhs = fold(cochar, group_cochar, res_op).dual()
        lhs_base = tuple(mat_vec(iota, b) for b in lhs.base)
        lhs_roots = {tuple(mat_vec(iota, r)) for r in lhs.roots}
        rhs = fold(char, group_char, norm_op)
        if lhs_base != rhs.base:
            mismatches.append("%s(Phi^vee)^vee base != %s(Phi) base" % (res_op, norm_op))
        if lhs_roots != set(rhs.roots):
            mismatches.append("%s(Phi^vee)^vee roots != %s(Phi) roots" % (res_op, norm_op))
    return {"datum": datum.label, "mismatches": mismatches, "ok": not mismatches}


def _form_identification(datum):
    """inverse Gram: carries X_* (x) Q into X^* (x) Q, sending v to the
    vector representing <., v> under the invariant form."""
    return mat_rational_inverse(datum.gram())
