"""Function-field arithmetic on a short-Weierstrass curve.

Elements are fractions (n0(x) + n1(x) y) / d0(x) with the relation
y^2 = x^3 + a4 x + a6 folded in, so the y-degree never exceeds one and
denominators stay y-free (inverses are rationalised through the norm).
On top of the representation this module provides local expansions at a
place, divisor-prescribed function construction by chord/vertical-line
accumulation, and Riemann-Roch bases.
"""

from __future__ import annotations

from .curve import INFINITY, single
from .errors import DomainError, InputError, InvariantViolation, PrecisionError
from .series import LaurentSeries

# --------------------------------------------------------------------------
# dense univariate polynomial helpers (little-endian coefficient lists)


def pnorm(K, a):
    while a and a[-1] == K.zero:
        a.pop()
    return a


def padd(K, a, b):
    n = max(len(a), len(b))
    out = []
    for i in range(n):
        x = a[i] if i < len(a) else K.zero
        y = b[i] if i < len(b) else K.zero
        out.append(K.add(x, y))
    return pnorm(K, out)


def pneg(K, a):
    return [K.neg(c) for c in a]


def psub(K, a, b):
    return padd(K, a, pneg(K, b))


def pmul(K, a, b):
    if not a or not b:
        return []
    out = [K.zero] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == K.zero:
            continue
        for j, y in enumerate(b):
            out[i + j] = K.add(out[i + j], K.mul(x, y))
    return pnorm(K, out)


def pscal(K, c, a):
    if c == K.zero:
        return []
    return pnorm(K, [K.mul(c, v) for v in a])


def pdivmod(K, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    a = list(a)
    q = [K.zero] * max(0, len(a) - len(b) + 1)
    inv_lead = K.inv(b[-1])
    while len(a) >= len(b) and pnorm(K, list(a)):
        a = pnorm(K, a)
        if len(a) < len(b):
            break
        shift = len(a) - len(b)
        f = K.mul(a[-1], inv_lead)
        q[shift] = f
        for i, c in enumerate(b):
            a[shift + i] = K.sub(a[shift + i], K.mul(f, c))
    return pnorm(K, q), pnorm(K, a)


def pgcd(K, a, b):
    a, b = list(a), list(b)
    while b:
        a, b = b, pdivmod(K, a, b)[1]
    if a:
        a = pscal(K, K.inv(a[-1]), a)
    return a


def peval(K, a, x):
    acc = K.zero
    for c in reversed(a):
        acc = K.add(K.mul(acc, x), c)
    return acc


def peval_series(K, a, xs):
    if not a:
        return LaurentSeries.zero(K, xs.prec)
    big = xs.prec + abs(min(0, xs.val)) * len(a) + 4
    acc = LaurentSeries.constant(K, a[-1], big)
    for c in reversed(a[:-1]):
        acc = acc.mul(xs)
        if c != K.zero:
            acc = acc.add(LaurentSeries.constant(K, c, big))
    return acc


# --------------------------------------------------------------------------


class FunctionRep:
    """(n0 + n1*y)/d0 on a fixed curve, y-reduced, denominator y-free and monic."""

    __slots__ = ("curve", "n0", "n1", "d0")

    def __init__(self, curve, n0, n1, d0):
        K = curve.field
        n0, n1, d0 = pnorm(K, list(n0)), pnorm(K, list(n1)), pnorm(K, list(d0))
        if not d0:
            raise InputError("zero denominator")
        if not n0 and not n1:
            self.curve, self.n0, self.n1, self.d0 = curve, [], [], [K.one]
            return
        g = pgcd(K, pgcd(K, n0, n1), d0)
        if len(g) > 1:
            n0 = pdivmod(K, n0, g)[0]
            n1 = pdivmod(K, n1, g)[0]
            d0 = pdivmod(K, d0, g)[0]
        lead = K.inv(d0[-1])
        self.curve = curve
        self.n0 = pscal(K, lead, n0)
        self.n1 = pscal(K, lead, n1)
        self.d0 = pscal(K, lead, d0)

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, curve):
        return cls(curve, [], [], [curve.field.one])

    @classmethod
    def one(cls, curve):
        return cls(curve, [curve.field.one], [], [curve.field.one])

    @classmethod
    def constant(cls, curve, c):
        return cls(curve, [c], [], [curve.field.one])

    @classmethod
    def coordinate_x(cls, curve):
        K = curve.field
        return cls(curve, [K.zero, K.one], [], [K.one])

    @classmethod
    def coordinate_y(cls, curve):
        K = curve.field
        return cls(curve, [], [K.one], [K.one])

    # -- predicates -----------------------------------------------------------
    def is_zero(self):
        return not self.n0 and not self.n1

    def __eq__(self, other):
        if not isinstance(other, FunctionRep) or other.curve != self.curve:
            return False
        return self.sub(other).is_zero()

    # -- arithmetic -------------------------------------------------------------
    def _cubic(self):
        K = self.curve.field
        return [self.curve.a6, self.curve.a4, K.zero, K.one]

    def mul(self, other):
        K = self.curve.field
        c = self._cubic()
        n0 = padd(K, pmul(K, self.n0, other.n0),
                  pmul(K, pmul(K, self.n1, other.n1), c))
        n1 = padd(K, pmul(K, self.n0, other.n1), pmul(K, self.n1, other.n0))
        return FunctionRep(self.curve, n0, n1, pmul(K, self.d0, other.d0))

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of the zero function")
        K = self.curve.field
        # 1/(n0 + n1 y) = (n0 - n1 y)/(n0^2 - n1^2 (x^3 + a4 x + a6))
        norm = psub(K, pmul(K, self.n0, self.n0),
                    pmul(K, pmul(K, self.n1, self.n1), self._cubic()))
        return FunctionRep(self.curve, pmul(K, self.d0, self.n0),
                           pneg(K, pmul(K, self.d0, self.n1)), norm)

    def div(self, other):
        return self.mul(other.inverse())

    def add(self, other):
        K = self.curve.field
        n0 = padd(K, pmul(K, self.n0, other.d0), pmul(K, other.n0, self.d0))
        n1 = padd(K, pmul(K, self.n1, other.d0), pmul(K, other.n1, self.d0))
        return FunctionRep(self.curve, n0, n1, pmul(K, self.d0, other.d0))

    def neg(self):
        K = self.curve.field
        return FunctionRep(self.curve, pneg(K, self.n0), pneg(K, self.n1), self.d0)

    def sub(self, other):
        return self.add(other.neg())

    def scalar_mul(self, c):
        K = self.curve.field
        return FunctionRep(self.curve, pscal(K, c, self.n0), pscal(K, c, self.n1), self.d0)

    # -- evaluation and expansion --------------------------------------------------
    def evaluate(self, place):
        """Exact value at an affine place where the denominator does not vanish."""
        if place.is_infinity:
            raise DomainError("use local expansion at the point at infinity")
        K = self.curve.field
        d = peval(K, self.d0, place.x)
        if d == K.zero:
            raise DomainError("denominator vanishes at the place")
        n = K.add(peval(K, self.n0, place.x), K.mul(peval(K, self.n1, place.x), place.y))
        return K.div(n, d)

    def _pole_bound(self):
        deg = max((len(self.n0) - 1) * 2, (len(self.n1) - 1) * 2 + 3 if self.n1 else 0,
                  (len(self.d0) - 1) * 2, 0)
        return deg + 3

    def _halves(self, place, work_prec):
        K = self.curve.field
        maxdeg = max(len(self.n0), len(self.n1), len(self.d0))
        pad = 2 * maxdeg + 8 if place.is_infinity else 4
        xs, ys = self.curve.param_series(place, work_prec + pad)
        num = peval_series(K, self.n0, xs)
        if self.n1:
            num = num.add(peval_series(K, self.n1, xs).mul(ys))
        den = peval_series(K, self.d0, xs)
        return num, den

    def local_expansion(self, place, precision):
        """Expansion in the canonical uniformiser, correct modulo t^precision."""
        if self.is_zero():
            raise DomainError("cannot expand the zero function")
        self.curve.check_place(place)
        bound = self._pole_bound() + max(precision, 0) + 8
        slack = 10
        while True:
            num, den = self._halves(place, precision + slack)
            if num.coeffs and den.coeffs:
                res = num.mul(den.invert())
                if res.prec >= precision:
                    res = res.truncate(precision)
                    if not res.coeffs:
                        # precision tracking is rigorous, so an empty window at
                        # full precision means ord(f) >= precision
                        raise PrecisionError(
                            f"requested precision {precision} does not exceed "
                            "the valuation of the function")
                    return res
            slack *= 2
            if slack > 8 * bound + 256:
                raise InvariantViolation(
                    "expansion failed to stabilise within the vanishing bound")

    def ord_at(self, place):
        """Order of vanishing (negative for a pole) at the place."""
        if self.is_zero():
            raise DomainError("the zero function has no order")
        self.curve.check_place(place)
        slack = 8
        bound = self._pole_bound()
        while True:
            num, den = self._halves(place, slack)
            if num.coeffs and den.coeffs:
                return num.valuation() - den.valuation()
            slack *= 2
            if slack > 4 * bound + 64:
                raise InvariantViolation("nonzero polynomial expanded to zero")

    # -- io ---------------------------------------------------------------------
    def to_str(self):
        K = self.curve.field
        num = _poly_pair_str(K, self.n0, self.n1)
        den = _poly_pair_str(K, self.d0, [])
        return num if den == "1" else f"({num})/({den})"

    def __repr__(self):
        return self.to_str()


def _poly_pair_str(K, a0, a1):
    terms = []
    for i, c in enumerate(a0):
        if c != K.zero:
            terms.append(_term_str(K, c, i, ""))
    for i, c in enumerate(a1):
        if c != K.zero:
            terms.append(_term_str(K, c, i, "y"))
    return " + ".join(terms) if terms else "0"


def _term_str(K, c, i, suffix):
    xpart = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
    body = "*".join(filter(None, [xpart, suffix]))
    cs = K.elt_to_json(c)
    if body and cs == "1":
        return body
    return f"{cs}*{body}" if body else f"{cs}"


# --------------------------------------------------------------------------
# chord / vertical-line building blocks


def vertical_line(curve, P):
    """x - x_P, with divisor (P) + (-P) - 2(O)."""
    K = curve.field
    return FunctionRep(curve, [K.neg(P.x), K.one], [], [K.one])


def chord_line(curve, P, Q):
    """y - (lam x + nu) through P and Q (tangent if P == Q); not for vertical pairs."""
    K = curve.field
    if P.x == Q.x and K.add(P.y, Q.y) == K.zero:
        raise InputError("chord through a vertical pair; use vertical_line")
    if P == Q:
        num = K.add(K.mul(K.from_int(3), K.mul(P.x, P.x)), curve.a4)
        lam = K.div(num, K.add(P.y, P.y))
    else:
        lam = K.div(K.sub(Q.y, P.y), K.sub(Q.x, P.x))
    nu = K.sub(P.y, K.mul(lam, P.x))
    return FunctionRep(curve, [K.neg(nu), K.neg(lam)], [K.one], [K.one])


def _line_step(curve, P, Q):
    """(h, P+Q) with div(h) = (P) + (Q) - (P+Q) - (O)."""
    if P.is_infinity:
        return FunctionRep.one(curve), Q
    if Q.is_infinity:
        return FunctionRep.one(curve), P
    R = curve.point_add(P, Q)
    if R.is_infinity:
        return vertical_line(curve, P), R
    line = chord_line(curve, P, Q)
    return line.div(vertical_line(curve, R)), R


def _accumulate(curve, part):
    """For effective part = [(place, mult)], a function g and point T with
    div(g) = part - (T) - (deg - 1)(O)."""
    g = FunctionRep.one(curve)
    T = INFINITY
    first = True
    for place, mult in part:
        for _ in range(mult):
            if first:
                T = place
                first = False
                continue
            h, T = _line_step(curve, T, place)
            g = g.mul(h)
    return g, T


def principal_function(curve, D):
    """A function with divisor exactly D; requires D principal."""
    if not curve.is_principal(D):
        raise DomainError("divisor is not principal")
    pos = [(p, m) for p, m in D.items_sorted() if m > 0 and not p.is_infinity]
    neg = [(p, -m) for p, m in D.items_sorted() if m < 0 and not p.is_infinity]
    gp, tp = _accumulate(curve, pos)
    gn, tn = _accumulate(curve, neg)
    if tp != tn:
        raise InvariantViolation("principal divisor accumulated to mismatched points")
    f = gp.div(gn)
    for place, mult in D.items_sorted():
        if f.ord_at(place) != mult:
            raise InvariantViolation(
                f"constructed function has ord {f.ord_at(place)} != {mult} at {place!r}")
    return f


# --------------------------------------------------------------------------
# Riemann-Roch spaces


def _pole_basis_at_infinity(curve, m):
    """Basis of L(m(O)): monomials x^i and x^i y sorted by pole order."""
    K = curve.field
    out = []
    for i in range(m // 2 + 1):
        if 2 * i <= m:
            xi = [K.zero] * i + [K.one]
            out.append((2 * i, FunctionRep(curve, xi, [], [K.one])))
    i = 0
    while 2 * i + 3 <= m:
        xi = [K.zero] * i + [K.one]
        out.append((2 * i + 3, FunctionRep(curve, [], xi, [K.one])))
        i += 1
    out.sort(key=lambda t: t[0])
    return [f for _, f in out]


def _simple_pole_function(curve, T):
    """(y + y_T)/(x - x_T): lies in L((T) + (O)) with an exact simple pole at T."""
    K = curve.field
    num = FunctionRep(curve, [T.y], [K.one], [K.one])
    return num.div(vertical_line(curve, T))


def rr_basis(curve, D):
    """Basis of L(D) = {f : div(f) + D >= 0}; genus-1 dimensions are exact."""
    m = D.degree
    if m < 0:
        return []
    if m == 0:
        if curve.is_principal(D):
            return [principal_function(curve, D.neg())]
        return []
    T, shift = curve.divisor_reduce(D)
    s = m - 1
    if T.is_infinity:
        base = _pole_basis_at_infinity(curve, m)
        target = single(INFINITY, m)
    else:
        base = _pole_basis_at_infinity(curve, s)
        if s >= 1:
            base = base + [_simple_pole_function(curve, T)]
        target = single(T).add(single(INFINITY, s))
    h = principal_function(curve, D.sub(target))
    hinv = h.inverse()
    return [b.mul(hinv) for b in base]
