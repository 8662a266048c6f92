"""Exact scalar arithmetic: prime fields, small extension fields, rationals.

Element values are raw Python objects (ints for finite fields, Fraction for
the rationals); every container pairs them with the Field object that knows
how to combine them.  This keeps the hot loops (series products, Gaussian
elimination, fibre scans) free of wrapper allocation.

Extension fields F_{p^e} are restricted to e <= 3: irreducibility of the
modulus is then equivalent to having no root in F_p, which we verify
exhaustively.  Elements are packed as integers in base p (little-endian
coefficients); multiplication goes through discrete-log tables.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import InputError

_EXT_DEGREE_MAX = 3
_EXT_ORDER_MAX = 20000


def is_prime(n):
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


class Field:
    """Common interface; subclasses implement the raw operations."""

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def is_zero(self, a):
        return a == self.zero

    def sum(self, values):
        acc = self.zero
        for v in values:
            acc = self.add(acc, v)
        return acc

    def dot(self, xs, ys):
        acc = self.zero
        for x, y in zip(xs, ys):
            acc = self.add(acc, self.mul(x, y))
        return acc

    def pow(self, a, n):
        if n < 0:
            return self.pow(self.inv(a), -n)
        acc, base = self.one, a
        while n:
            if n & 1:
                acc = self.mul(acc, base)
            base = self.mul(base, base)
            n >>= 1
        return acc

    @property
    def is_finite(self):
        return self.order is not None

    def embed(self, a):
        """Image of a prime-subfield element; extension fields override."""
        return a

    def __ne__(self, other):
        return not self.__eq__(other)


class PrimeField(Field):
    """F_p, p prime, p not in {2, 3}; elements are ints in [0, p)."""

    kind = "prime"

    def __init__(self, p):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        self.p = p
        self.char = p
        self.order = p
        self.degree = 1
        self.zero = 0
        self.one = 1 % p

    def add(self, a, b):
        return (a + b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def inv(self, a):
        if a % self.p == 0:
            raise ZeroDivisionError("inverse of zero")
        return pow(a, -1, self.p)

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.p)

    def validate(self, a):
        if not isinstance(a, int) or not (0 <= a < self.p):
            raise InputError(f"{a!r} is not a reduced element of F_{self.p}")
        return a

    def elt_to_json(self, a):
        return str(a)

    def elt_from_json(self, obj):
        return int(obj) % self.p

    def desc(self):
        return {"kind": "prime", "p": self.p}

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("prime", self.p))

    def __repr__(self):
        return f"F_{self.p}"


class ExtensionField(Field):
    """F_{p^e} = F_p[t]/(modulus), e <= 3, via packed-int elements.

    modulus is the little-endian coefficient list of a monic irreducible
    polynomial of the stated degree over F_p.
    """

    kind = "extension"

    def __init__(self, p, modulus):
        if not is_prime(p):
            raise InputError(f"{p} is not prime")
        e = len(modulus) - 1
        if not (1 <= e <= _EXT_DEGREE_MAX):
            raise InputError(f"extension degree {e} outside supported range 1..{_EXT_DEGREE_MAX}")
        modulus = [c % p for c in modulus]
        if modulus[-1] != 1:
            raise InputError("modulus must be monic")
        if e >= 2 and any(_poly_eval_mod(modulus, x, p) == 0 for x in range(p)):
            raise InputError("modulus has a root in the prime field, not irreducible")
        q = p ** e
        if q > _EXT_ORDER_MAX:
            raise InputError(f"field order {q} exceeds table limit {_EXT_ORDER_MAX}")
        self.p = p
        self.char = p
        self.degree = e
        self.order = q
        self.modulus = tuple(modulus)
        self.zero = 0
        self.one = 1
        self._build_tables()

    # -- packed representation helpers ------------------------------------
    def _unpack(self, a):
        p, out = self.p, []
        for _ in range(self.degree):
            out.append(a % p)
            a //= p
        return out

    def _pack(self, coeffs):
        acc = 0
        for c in reversed(coeffs):
            acc = acc * self.p + (c % self.p)
        return acc

    def _raw_mul(self, a, b):
        p, e = self.p, self.degree
        ca, cb = self._unpack(a), self._unpack(b)
        prod = [0] * (2 * e - 1)
        for i, x in enumerate(ca):
            if x:
                for j, y in enumerate(cb):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for i in range(len(prod) - 1, e - 1, -1):
            c = prod[i]
            if c:
                prod[i] = 0
                for j in range(e):
                    prod[i - e + j] = (prod[i - e + j] - c * mod[j]) % p
        return self._pack(prod[:e])

    def _build_tables(self):
        q = self.order
        for g in range(2, q):
            seen = 1
            acc = g
            expt = [1]
            while acc != 1:
                expt.append(acc)
                acc = self._raw_mul(acc, g)
                seen += 1
                if seen > q:
                    raise InputError("modulus is not irreducible (unit group too small)")
            if seen == q - 1:
                self._exp = expt
                log = [0] * q
                for i, v in enumerate(expt):
                    log[v] = i
                self._log = log
                return
        raise InputError("no multiplicative generator found; modulus not irreducible")

    # -- field operations --------------------------------------------------
    def add(self, a, b):
        p, acc, mult = self.p, 0, 1
        for _ in range(self.degree):
            acc += ((a + b) % p) * mult
            a //= p
            b //= p
            mult *= p
        return acc

    def neg(self, a):
        p, acc, mult = self.p, 0, 1
        for _ in range(self.degree):
            acc += ((-a) % p) * mult
            a //= p
            mult *= p
        return acc

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        n = self._log[a] + self._log[b]
        qm1 = self.order - 1
        if n >= qm1:
            n -= qm1
        return self._exp[n]

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return self._exp[(-self._log[a]) % (self.order - 1)]

    def from_int(self, n):
        return n % self.p

    def embed(self, a):
        """Image of a prime-field element under F_p -> F_{p^e}."""
        return a % self.p

    def elements(self):
        return range(self.order)

    def validate(self, a):
        if not isinstance(a, int) or not (0 <= a < self.order):
            raise InputError(f"{a!r} is not a packed element of F_{self.p}^{self.degree}")
        return a

    def elt_to_json(self, a):
        return self._unpack(a)

    def elt_from_json(self, obj):
        if isinstance(obj, (int, str)):
            return int(obj) % self.p
        return self._pack([int(c) for c in obj])

    def desc(self):
        return {"kind": "extension", "p": self.p, "degree": self.degree,
                "modulus": list(self.modulus)}

    def __eq__(self, other):
        return (isinstance(other, ExtensionField) and other.p == self.p
                and other.modulus == self.modulus)

    def __hash__(self):
        return hash(("ext", self.p, self.modulus))

    def __repr__(self):
        return f"F_{self.p}^{self.degree}"


class RationalField(Field):
    """The rationals, via Fraction (gcd-normalized, exact)."""

    kind = "rationals"

    def __init__(self):
        self.char = 0
        self.order = None
        self.degree = 1
        self.p = None
        self.zero = Fraction(0)
        self.one = Fraction(1)

    def add(self, a, b):
        return a + b

    def neg(self, a):
        return -a

    def mul(self, a, b):
        return a * b

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError("inverse of zero")
        return 1 / a

    def from_int(self, n):
        return Fraction(n)

    def elements(self):
        raise InputError("cannot enumerate an infinite field")

    def validate(self, a):
        if not isinstance(a, Fraction):
            raise InputError(f"{a!r} is not a Fraction")
        return a

    def elt_to_json(self, a):
        return str(a.numerator) if a.denominator == 1 else f"{a.numerator}/{a.denominator}"

    def elt_from_json(self, obj):
        if isinstance(obj, int):
            return Fraction(obj)
        return Fraction(str(obj))

    def desc(self):
        return {"kind": "rationals"}

    def __eq__(self, other):
        return isinstance(other, RationalField)

    def __hash__(self):
        return hash("rationals")

    def __repr__(self):
        return "QQ"


def _poly_eval_mod(coeffs, x, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * x + c) % p
    return acc


def find_irreducible(p, degree):
    """Smallest monic irreducible of the given degree over F_p, by packed order."""
    if degree == 1:
        return [0, 1]
    if degree > _EXT_DEGREE_MAX:
        raise InputError(f"degree {degree} outside supported range")
    for packed in range(p ** degree):
        coeffs = []
        n = packed
        for _ in range(degree):
            coeffs.append(n % p)
            n //= p
        coeffs.append(1)
        if all(_poly_eval_mod(coeffs, x, p) != 0 for x in range(p)):
            return coeffs
    raise InputError("no irreducible found")  # unreachable for prime p


def field_from_desc(desc):
    kind = desc.get("kind")
    if kind == "prime":
        return PrimeField(int(desc["p"]))
    if kind == "extension":
        p, degree = int(desc["p"]), int(desc["degree"])
        modulus = desc.get("modulus") or find_irreducible(p, degree)
        if len(modulus) != degree + 1:
            raise InputError("modulus length does not match stated degree")
        return ExtensionField(p, [int(c) for c in modulus])
    if kind == "rationals":
        return RationalField()
    raise InputError(f"unknown field kind {kind!r}")


def extension_of(field, e):
    """Degree-e extension of a prime field (identity when e == 1)."""
    if e == 1:
        return field
    if not isinstance(field, PrimeField):
        raise InputError("base change is only supported from a prime field")
    return ExtensionField(field.p, find_irreducible(field.p, e))
