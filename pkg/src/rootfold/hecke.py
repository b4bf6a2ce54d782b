"""Affine Hecke algebras with unequal parameters and their canonical bases.

The algebra H(W~^tau, S_aff^tau, L) is realized on the normalized basis
Ttilde_w = q^(-L(w)/2) T_w over Z[v, v^(-1)], v = q^(1/2):

    Ttilde_s^2 = (v_s - v_s^(-1)) Ttilde_s + 1,      v_s = v^L(s),

so that the standard-basis relation T_s^2 = (q^L(s)-1) T_s + q^L(s) T_e
holds after rescaling.  Kazhdan-Lusztig elements c_y = sum p_{x,y} Ttilde_x
are computed from the bar involution by triangular solving; the polynomials
P_{x,y} = v^(L(y)-L(x)) p_{x,y} specialize at v = 1 to the coefficients of
the geometric basis of the Hecke-algebra center (the Knop/Lusztig character
formula), which is also computed independently from twining characters.
"""

from __future__ import annotations

from .echelonnage import TheoremViolation
from .ring import Cyc, LaurentPoly

KL_INTERVAL_CAP = 100000


class UndefinedPair(ValueError):
    """Kazhdan-Lusztig polynomial requested outside the Bruhat order."""


class HeckeElement:
    """Finite Z[v,v^-1]-combination of normalized basis elements Ttilde_w."""

    __slots__ = ("algebra", "terms")

    def __init__(self, algebra, terms=None):
        self.algebra = algebra
        t = {}
        for x, c in (terms or {}).items():
            if not c.is_zero():
                t[x] = c
        self.terms = t

    def __eq__(self, other):
        return isinstance(other, HeckeElement) and self.terms == other.terms

    def __add__(self, other):
        t = dict(self.terms)
        for x, c in other.terms.items():
            s = t.get(x, LaurentPoly.zero()) + c
            if s.is_zero():
                t.pop(x, None)
            else:
                t[x] = s
        return HeckeElement(self.algebra, t)

    def __sub__(self, other):
        return self + other.scale(LaurentPoly({0: -1}))

    def scale(self, poly):
        return HeckeElement(self.algebra, {x: c * poly for x, c in self.terms.items()})

    def coefficient(self, x):
        return self.terms.get(x, LaurentPoly.zero())

    def __repr__(self):
        return "HeckeElement(%d terms)" % len(self.terms)


class HeckeAlgebra:
    """H(W~^tau, S_aff^tau, L) over an extended affine Weyl engine."""

    def __init__(self, engine, weights):
        self.engine = engine
        self.weights = dict(weights)
        for key, _s in engine.s_aff:
            if key not in self.weights:
                raise ValueError("missing parameter for wall %r" % (key,))
            if self.weights[key] < 1:
                raise ValueError("parameters must be >= 1")
        self._bar_cache = {}
        self._kl_cache = {}
        self._weight_check = set()

    # -- weights --------------------------------------------------------------

    def weight(self, x):
        """L(x) = sum of L(s) over a reduced word (Omega contributes 0)."""
        word, _omega = self.engine.normal_form(x)
        return sum(self.weights[k] for k in word)

    def _eps(self, key):
        L = self.weights[key]
        return LaurentPoly({L: 1, -L: -1})

    # -- basis elements ---------------------------------------------------------

    def one(self):
        return HeckeElement(self, {self.engine.identity: LaurentPoly.one()})

    def t_normalized(self, x):
        return HeckeElement(self, {x: LaurentPoly.one()})

    def t_standard(self, x):
        """Standard basis T_x = v^L(x) Ttilde_x."""
        return HeckeElement(self, {x: LaurentPoly.v_power(self.weight(x))})

    # -- multiplication -----------------------------------------------------------

    def _mult_gen(self, elt, key, side):
        """Multiply by Ttilde_s on the chosen side."""
        eng = self.engine
        s = eng._s_aff_map[key]
        out = {}

        def add(x, c):
            cur = out.get(x)
            s2 = c if cur is None else cur + c
            if s2.is_zero():
                out.pop(x, None)
            else:
                out[x] = s2

        for x, c in elt.terms.items():
            xs = eng.multiply(x, s) if side == "right" else eng.multiply(s, x)
            if eng.length(xs) > eng.length(x):
                add(xs, c)
            else:
                add(xs, c)
                add(x, c * self._eps(key))
        return HeckeElement(self, out)

    def _mult_omega(self, elt, omega, side):
        eng = self.engine
        out = {}
        for x, c in elt.terms.items():
            y = eng.multiply(x, omega) if side == "right" else eng.multiply(omega, x)
            out[y] = c
        return HeckeElement(self, out)

    def multiply(self, a, b):
        """Product in H, expanding b through its normal form letters."""
        out = HeckeElement(self, {})
        eng = self.engine
        for y, c in b.terms.items():
            word, omega = eng.normal_form(y)
            self._check_weight_consistency(y, word)
            acc = a.scale(c)
            for key in word:
                acc = self._mult_gen(acc, key, "right")
            acc = self._mult_omega(acc, omega, "right")
            out = out + acc
        return out

    def _check_weight_consistency(self, y, word):
        """L must be constant across reduced words (checked against the
        descent-peeled word of y^-1 reversed, a different reduced word)."""
        if y in self._weight_check:
            return
        self._weight_check.add(y)
        alt, _ = self.engine.normal_form(self.engine.inverse(y))
        if sum(self.weights[k] for k in word) != sum(self.weights[k] for k in alt):
            raise TheoremViolation("weight function is not well-defined")

    # -- bar involution -----------------------------------------------------------

    def bar_basis(self, x):
        """bar(Ttilde_x) = Ttilde_{x^-1}^{-1}, expanded in the Ttilde basis."""
        if x in self._bar_cache:
            return self._bar_cache[x]
        eng = self.engine
        word, omega = eng.normal_form(x)
        out = HeckeElement(self, {omega: LaurentPoly.one()})
        # bar(Ttilde_s) = Ttilde_s - (v_s - v_s^{-1}); multiply left-to-right
        for key in reversed(word):
            out = self._mult_gen(out, key, "left") + \
                out.scale(-self._eps(key))
        self._bar_cache[x] = out
        return out

    def bar(self, elt):
        out = HeckeElement(self, {})
        for x, c in elt.terms.items():
            out = out + self.bar_basis(x).scale(c.bar())
        return out

    # -- Kazhdan-Lusztig ---------------------------------------------------------

    def kl_table(self, y):
        """{x: p_{x,y}} with c_y = sum_x p_{x,y} Ttilde_x bar-invariant,
        p_{y,y} = 1 and deg p_{x,y} < 0 for x < y."""
        if y in self._kl_cache:
            return self._kl_cache[y]
        eng = self.engine
        word, omega = eng.normal_form(y)
        y_aff = eng.multiply(y, eng.inverse(omega))
        interval = sorted(eng.lower_interval(y_aff),
                          key=lambda x: -eng.length(x))
        if len(interval) > KL_INTERVAL_CAP:
            from .lattice import ResourceCap
            raise ResourceCap("Bruhat interval for the KL solve exceeds %d"
                              % KL_INTERVAL_CAP)
        bar_rows = {x: self.bar_basis(x) for x in interval}
        p = {y_aff: LaurentPoly.one()}
        for x in interval:
            if x == y_aff:
                continue
            f = LaurentPoly.zero()
            for w, pw in p.items():
                if w == x:
                    continue
                f = f + pw.bar() * bar_rows[w].coefficient(x)
            if f.bar() != -f or f.constant_term() != 0:
                raise TheoremViolation("bar self-consistency failed in KL solve")
            px = f.negative_part()
            if not px.is_zero():
                p[x] = px
        # verify: c_y is bar-invariant
        c = HeckeElement(self, {eng.multiply(x, omega): q for x, q in p.items()})
        if self.bar(c) != c:
            raise TheoremViolation("canonical basis element is not bar-invariant")
        table = {eng.multiply(x, omega): q for x, q in p.items()}
        self._kl_cache[y] = table
        return table

    def kl_polynomial(self, x, y):
        """P_{x,y}(v) = v^(L(y) - L(x)) p_{x,y}; requires x <= y."""
        if not self.engine.bruhat_leq(x, y):
            raise UndefinedPair("x is not Bruhat-below y")
        p = self.kl_table(y).get(x, LaurentPoly.zero())
        P = p.shifted(self.weight(y) - self.weight(x))
        if not p.is_zero() and P.min_degree() < 0:
            raise TheoremViolation("KL polynomial has negative v-degrees")
        return P

    def canonical_basis_element(self, y):
        return HeckeElement(self, self.kl_table(y))


class BernsteinElement:
    """Element of the center in the Bernstein basis: a finitely supported
    map from dominant tau-fixed weight classes to cyclotomic integers."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=None):
        c = {}
        for k, val in (coeffs or {}).items():
            if isinstance(val, int):
                val = Cyc.integer(val)
            if not val.is_zero():
                c[k] = val
        self.coeffs = c

    def __add__(self, other):
        c = dict(self.coeffs)
        for k, v in other.coeffs.items():
            s = c.get(k, Cyc.integer(0)) + v
            if s.is_zero():
                c.pop(k, None)
            else:
                c[k] = s
        return BernsteinElement(c)

    def scale(self, val):
        if isinstance(val, int):
            val = Cyc.integer(val)
        return BernsteinElement({k: v * val for k, v in self.coeffs.items()})

    def __sub__(self, other):
        return self + other.scale(-1)

    def __eq__(self, other):
        return isinstance(other, BernsteinElement) and self.coeffs == other.coeffs

    def items_sorted(self):
        return sorted(self.coeffs.items(), key=lambda kv: (kv[0].free, kv[0].tors))

    def __repr__(self):
        return "BernsteinElement(%r)" % {
            (k.free, k.tors): v.to_tuple() for k, v in self.items_sorted()}


class CenterContext:
    """The center of the parahoric Hecke algebra of one local datum.

    Bundles the tau-fixed affine engine, the weighted Hecke algebra, and the
    character machinery; produces geometric basis elements by the twining
    route and the Kazhdan-Lusztig route."""

    def __init__(self, lgd, overrides=None):
        from .affine import build_affine, build_tau_fixed
        from .characters import CharacterContext
        self.lgd = lgd
        self.ech = lgd.echelonnage()
        self.breve_engine = build_affine(lgd)
        self.tau_engine = build_tau_fixed(lgd, self.breve_engine)
        self.parameters = self.ech.parameter_function(overrides)
        self.hecke = HeckeAlgebra(self.tau_engine, self.parameters)
        self.chars = CharacterContext(lgd)

    # -- enumeration ------------------------------------------------------------

    def dominant_tau_fixed_weights(self, lam):
        """Wt(lambda)^{+,tau} inside the coinvariant lattice."""
        h = self.chars.h
        out = [nu for nu in h.weight_set(lam)
               if h.is_tau_fixed(nu) and h.is_dominant(nu)]
        return sorted(out, key=lambda c: (c.free, c.tors))

    # -- geometric basis -----------------------------------------------------------

    def geometric_basis(self, lam):
        """C_lambda in the z-basis, coefficients tr(tau | V_{lambda,1}(nu))."""
        h = self.chars.h
        if not (h.is_dominant(lam) and h.is_tau_fixed(lam)):
            raise ValueError("lambda must be dominant and tau-fixed")
        tw = h.twisted_hw_character(lam)
        coeffs = {}
        for nu in self.dominant_tau_fixed_weights(lam):
            val = tw.get(nu, 0)
            if val:
                coeffs[nu] = Cyc.integer(val)
        if coeffs.get(lam) != Cyc.integer(1):
            raise TheoremViolation("geometric basis element is not unitriangular")
        return BernsteinElement(coeffs)

    def geometric_basis_kl(self, lam):
        """The same element with coefficients P_{w_nu, w_lambda}(1)."""
        h = self.chars.h
        eng = self.tau_engine
        w_lam = eng.max_double_coset(lam)
        coeffs = {}
        for nu in self.dominant_tau_fixed_weights(lam):
            w_nu = eng.max_double_coset(nu)
            val = self.hecke.kl_polynomial(w_nu, w_lam).at_one()
            if val:
                coeffs[nu] = Cyc.integer(val)
        return BernsteinElement(coeffs)

    def geometric_basis_checked(self, lam):
        """Both routes; raises if the Knop/Lusztig bridge fails."""
        a = self.geometric_basis(lam)
        b = self.geometric_basis_kl(lam)
        if a != b:
            raise TheoremViolation("twining and KL routes disagree for %r" % (lam,))
        return a


def evaluate_bernstein(center, elt, point):
    """The scalar by which `elt` acts on a J-fixed line with Satake-type
    parameter `point`: sum_nu c_nu sum_{nu' in W_0 nu} point(nu').

    `point` maps tau-fixed weight classes to scalars and must be defined on
    the whole W_0-orbit of every support weight."""
    eng = center.tau_engine
    total = None
    for nu, c in elt.coeffs.items():
        orbit_total = None
        for nu2 in eng.weyl_orbit_class(nu):
            try:
                val = point(nu2)
            except KeyError:
                raise ValueError("evaluation map is not defined on the "
                                 "W_0-orbit of %r" % (nu,))
            orbit_total = val if orbit_total is None else orbit_total + val
        term = c * orbit_total
        total = term if total is None else total + term
    return total if total is not None else Cyc.integer(0)
