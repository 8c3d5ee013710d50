"""Exact scalar arithmetic over Q and simple number fields Q[s]/(p(s)).

Scalars over Q are plain ``fractions.Fraction`` values (always reduced,
positive denominator).  Scalars over an extension field are tuples of
Fractions, the coefficients over the power basis {1, s, ..., s^(n-1)}.
All operations go through a :class:`FieldSpec`, which caches the reduction
table of the minimal polynomial.

Everything here is immutable and safe to share across threads.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Optional, Sequence, Tuple, Union

Rational = Fraction
Scalar = Union[Fraction, Tuple[Fraction, ...]]


class ExactError(ValueError):
    """Raised on contract violations in exact arithmetic."""


def rational_from_string(text: str) -> Fraction:
    return Fraction(text.strip())


def rational_to_string(q: Fraction) -> str:
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def _integer_content(coeffs: Sequence[Fraction]) -> Tuple[int, int]:
    # returns (num_gcd, den_lcm) so coeffs * den_lcm / num_gcd is primitive integer
    den = 1
    for c in coeffs:
        den = den * c.denominator // gcd(den, c.denominator)
    num = 0
    for c in coeffs:
        num = gcd(num, abs(c.numerator * (den // c.denominator)))
    return (num or 1, den)


def _divisors(n: int):
    n = abs(n)
    out = []
    d = 1
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            if d != n // d:
                out.append(n // d)
        d += 1
    return sorted(out)


def _has_rational_root(coeffs: Sequence[Fraction]) -> bool:
    # monic polynomial with rational coefficients; rational root test on the
    # primitive integer form a_n x^n + ... + a_0
    num_g, den_l = _integer_content(coeffs)
    ints = [int(c * den_l) // num_g if num_g else 0 for c in coeffs]
    while ints and ints[-1] == 0:
        ints.pop()
    if len(ints) <= 1:
        return True
    if ints[0] == 0:
        return True  # root 0
    lead, const = ints[-1], ints[0]
    for p in _divisors(const):
        for q in _divisors(lead):
            for sign in (1, -1):
                r = Fraction(sign * p, q)
                acc = Fraction(0)
                for c in reversed(ints):
                    acc = acc * r + c
                if acc == 0:
                    return True
    return False


def _quartic_splits_into_quadratics(coeffs: Sequence[Fraction]) -> bool:
    # monic quartic over Q factors into two monic rational quadratics iff the
    # scaled integer-monic form does (Gauss); enumerate divisor pairs of the
    # constant term.
    e3, e2, e1, e0 = coeffs[3], coeffs[2], coeffs[1], coeffs[0]
    den = 1
    for c in (e3, e2, e1, e0):
        den = den * c.denominator // gcd(den, c.denominator)
    # substitute x = y/den: y^4 + e3*den y^3 + e2*den^2 y^2 + ...
    a3 = int(e3 * den)
    a2 = int(e2 * den * den)
    a1 = int(e1 * den ** 3)
    a0 = int(e0 * den ** 4)
    if a0 == 0:
        return True
    cands = _divisors(a0)
    cands = cands + [-d for d in cands]
    for b in cands:
        if a0 % b != 0:
            continue
        d = a0 // b
        # (y^2 + a y + b)(y^2 + c y + d): a + c = a3, b + d + a c = a2,
        # a d + b c = a1
        # solve linear system in a, c: a + c = a3, a d + c b = a1
        det = d - b
        if det == 0:
            # a + c = a3 and (a + c) b = a1 -> need a3*b == a1, then a*c = a2 - 2b
            if a3 * b != a1:
                continue
            # a, c roots of t^2 - a3 t + (a2 - 2b)
            disc = a3 * a3 - 4 * (a2 - 2 * b)
            if disc < 0:
                continue
            r = _isqrt(disc)
            if r * r == disc:
                return True
            continue
        num_a = a1 - a3 * b
        if num_a % det != 0:
            continue
        a = num_a // det
        c = a3 - a
        if b + d + a * c == a2:
            return True
    return False


def _isqrt(n: int) -> int:
    if n < 0:
        return -1
    x = int(n ** 0.5)
    while x * x > n:
        x -= 1
    while (x + 1) * (x + 1) <= n:
        x += 1
    return x


class FieldSpec:
    """Either the rationals or a simple extension Q[s]/(p(s)).

    ``minpoly`` is the full monic coefficient list (c0, ..., c_{deg-1}, 1),
    lowest power first.  Irreducibility over Q is verified for degree <= 4
    (rational roots always, quadratic factors for quartics); for higher
    degrees the caller asserts it.
    """

    __slots__ = ("kind", "minpoly", "degree", "_reduction", "_hash")

    def __init__(self, kind: str, minpoly: Optional[Sequence[Fraction]] = None):
        if kind == "Q":
            self.kind = "Q"
            self.minpoly = None
            self.degree = 1
            self._reduction = None
        elif kind == "ext":
            if minpoly is None:
                raise ExactError("extension field needs a minimal polynomial")
            mp = tuple(Fraction(c) for c in minpoly)
            if len(mp) < 3:
                raise ExactError("extension degree must be >= 2")
            if mp[-1] != 1:
                raise ExactError("minimal polynomial must be monic")
            deg = len(mp) - 1
            if _has_rational_root(mp):
                raise ExactError("minimal polynomial has a rational root")
            if deg == 4 and _quartic_splits_into_quadratics(mp):
                raise ExactError("quartic minimal polynomial splits over Q")
            self.kind = "ext"
            self.minpoly = mp
            self.degree = deg
            self._reduction = self._power_table()
        else:
            raise ExactError("unknown field kind %r" % kind)
        self._hash = hash((self.kind, self.minpoly))

    def _power_table(self):
        # rows: coefficients of s^k over the power basis, k = 0 .. 2*deg - 2
        deg = len(self.minpoly) - 1
        rows = []
        cur = [Fraction(0)] * deg
        cur[0] = Fraction(1)
        for _ in range(2 * deg - 1):
            rows.append(tuple(cur))
            nxt = [Fraction(0)] + cur[: deg - 1]
            top = cur[deg - 1]
            if top:
                for i in range(deg):
                    nxt[i] -= top * self.minpoly[i]
            cur = nxt
        return tuple(rows)

    # -- constructors -----------------------------------------------------

    @staticmethod
    def rationals() -> "FieldSpec":
        return QQ

    @staticmethod
    def extension(minpoly: Sequence[Fraction]) -> "FieldSpec":
        return FieldSpec("ext", minpoly)

    # -- scalar constants -------------------------------------------------

    def zero(self) -> Scalar:
        if self.kind == "Q":
            return Fraction(0)
        return (Fraction(0),) * self.degree

    def one(self) -> Scalar:
        if self.kind == "Q":
            return Fraction(1)
        return (Fraction(1),) + (Fraction(0),) * (self.degree - 1)

    def gen(self) -> Scalar:
        """The adjoined root s (errors over Q)."""
        if self.kind == "Q":
            raise ExactError("Q has no adjoined generator")
        c = [Fraction(0)] * self.degree
        c[1] = Fraction(1)
        return tuple(c)

    def from_rational(self, q) -> Scalar:
        q = Fraction(q)
        if self.kind == "Q":
            return q
        return (q,) + (Fraction(0),) * (self.degree - 1)

    def from_coeffs(self, coeffs: Sequence[Fraction]) -> Scalar:
        if self.kind == "Q":
            if len(coeffs) != 1:
                raise ExactError("Q scalars have one coefficient")
            return Fraction(coeffs[0])
        c = [Fraction(x) for x in coeffs]
        if len(c) > self.degree:
            raise ExactError("too many coefficients")
        c += [Fraction(0)] * (self.degree - len(c))
        return tuple(c)

    def coeffs(self, a: Scalar) -> Tuple[Fraction, ...]:
        if self.kind == "Q":
            return (a,)
        return a

    # -- arithmetic --------------------------------------------------------

    def add(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == "Q":
            return a + b
        return tuple(x + y for x, y in zip(a, b))

    def sub(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == "Q":
            return a - b
        return tuple(x - y for x, y in zip(a, b))

    def neg(self, a: Scalar) -> Scalar:
        if self.kind == "Q":
            return -a
        return tuple(-x for x in a)

    def mul(self, a: Scalar, b: Scalar) -> Scalar:
        if self.kind == "Q":
            return a * b
        deg = self.degree
        conv = [Fraction(0)] * (2 * deg - 1)
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if y:
                    conv[i + j] += x * y
        out = [Fraction(0)] * deg
        red = self._reduction
        for k, c in enumerate(conv):
            if c:
                row = red[k]
                for i in range(deg):
                    if row[i]:
                        out[i] += c * row[i]
        return tuple(out)

    def is_zero(self, a: Scalar) -> bool:
        if self.kind == "Q":
            return a == 0
        return all(x == 0 for x in a)

    def mul_matrix(self, a: Scalar):
        """Matrix of multiplication by ``a`` over the power basis (list of rows)."""
        deg = self.degree
        cols = []
        b = self.one()
        s = self.gen() if deg > 1 else None
        for _ in range(deg):
            cols.append(self.mul(a, b))
            if s is not None:
                b = self.mul(b, s)
        return [[cols[j][i] for j in range(deg)] for i in range(deg)]

    def inv(self, a: Scalar) -> Scalar:
        if self.is_zero(a):
            raise ZeroDivisionError("inverse of zero field element")
        if self.kind == "Q":
            return Fraction(1) / a
        # solve M(a) x = e_0 by Gaussian elimination on the multiplication matrix
        deg = self.degree
        m = self.mul_matrix(a)
        rhs = [Fraction(1)] + [Fraction(0)] * (deg - 1)
        for col in range(deg):
            piv = None
            for r in range(col, deg):
                if m[r][col] != 0:
                    piv = r
                    break
            if piv is None:
                raise ExactError("reducible minimal polynomial detected")
            m[col], m[piv] = m[piv], m[col]
            rhs[col], rhs[piv] = rhs[piv], rhs[col]
            p = m[col][col]
            for r in range(deg):
                if r != col and m[r][col] != 0:
                    f = m[r][col] / p
                    for c2 in range(col, deg):
                        m[r][c2] -= f * m[col][c2]
                    rhs[r] -= f * rhs[col]
        return tuple(rhs[i] / m[i][i] for i in range(deg))

    def div(self, a: Scalar, b: Scalar) -> Scalar:
        return self.mul(a, self.inv(b))

    def norm(self, a: Scalar) -> Fraction:
        """Field norm N(a) = det of multiplication by a."""
        if self.kind == "Q":
            return a
        m = self.mul_matrix(a)
        deg = self.degree
        det = Fraction(1)
        for col in range(deg):
            piv = None
            for r in range(col, deg):
                if m[r][col] != 0:
                    piv = r
                    break
            if piv is None:
                return Fraction(0)
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                det = -det
            p = m[col][col]
            det *= p
            for r in range(col + 1, deg):
                if m[r][col] != 0:
                    f = m[r][col] / p
                    for c2 in range(col, deg):
                        m[r][c2] -= f * m[col][c2]
        return det

    def embed(self, a: Scalar, sub: "FieldSpec") -> Scalar:
        """Embed a scalar of ``sub`` (must be Q) into this field."""
        if sub.kind != "Q":
            raise ExactError("only Q embeds into extensions")
        return self.from_rational(a)

    # -- serialization -----------------------------------------------------

    def scalar_to_json(self, a: Scalar):
        if self.kind == "Q":
            return rational_to_string(a)
        return [rational_to_string(c) for c in a]

    def scalar_from_json(self, obj) -> Scalar:
        if self.kind == "Q":
            if not isinstance(obj, str):
                raise ExactError("rational scalars serialize as strings")
            return rational_from_string(obj)
        if isinstance(obj, str):
            return self.from_rational(rational_from_string(obj))
        return self.from_coeffs([rational_from_string(c) for c in obj])

    def to_json(self):
        if self.kind == "Q":
            return {"kind": "Q"}
        return {"kind": "ext", "minpoly": [rational_to_string(c) for c in self.minpoly]}

    @staticmethod
    def from_json(obj) -> "FieldSpec":
        if obj["kind"] == "Q":
            return QQ
        return FieldSpec.extension([rational_from_string(c) for c in obj["minpoly"]])

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, FieldSpec)
            and self.kind == other.kind
            and self.minpoly == other.minpoly
        )

    def __hash__(self):
        return self._hash

    def __repr__(self):
        if self.kind == "Q":
            return "Q"
        return "Q[s]/(%s)" % poly_str(self.minpoly)


def poly_str(coeffs: Sequence[Fraction], var: str = "s") -> str:
    parts = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = coeffs[k]
        if c == 0:
            continue
        if k == 0:
            parts.append(rational_to_string(c))
        else:
            mono = var if k == 1 else "%s^%d" % (var, k)
            if c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(rational_to_string(c) + "*" + mono)
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def parse_monic_poly(text: str, var: str = "x") -> Tuple[Fraction, ...]:
    """Parse a univariate polynomial like ``x^2+1`` or ``x^3 - 2*x + 1/2``.

    Returns the full coefficient tuple, lowest power first.
    """
    s = text.replace(" ", "").replace("·", "*").replace("**", "^")
    if not s:
        raise ExactError("empty polynomial")
    s = s.replace("-", "+-")
    if s.startswith("+"):
        s = s[1:]
    coeffs = {}
    for term in s.split("+"):
        if not term:
            continue
        neg = term.startswith("-")
        if neg:
            term = term[1:]
        coef = Fraction(1)
        power = 0
        for factor in term.split("*"):
            if not factor:
                continue
            if factor.startswith(var):
                rest = factor[len(var):]
                power += 1 if not rest else int(rest.lstrip("^"))
            else:
                coef *= Fraction(factor)
        if neg:
            coef = -coef
        coeffs[power] = coeffs.get(power, Fraction(0)) + coef
    deg = max(coeffs) if coeffs else 0
    return tuple(coeffs.get(k, Fraction(0)) for k in range(deg + 1))


QQ = FieldSpec("Q")


def field_mul(a: Scalar, b: Scalar, f: FieldSpec) -> Scalar:
    """Product in ``f``; validates the operands live in ``f``."""
    for v in (a, b):
        if f.kind == "Q":
            if not isinstance(v, Fraction):
                raise ExactError("scalar does not belong to Q")
        else:
            if not isinstance(v, tuple) or len(v) != f.degree:
                raise ExactError("scalar does not belong to the extension field")
    return f.mul(a, b)
