"""Sparse multivariate polynomials and rational functions over a FieldSpec.

Terms map exponent tuples to nonzero field scalars.  The canonical textual
form is graded lexicographic (higher total degree first, then x1 beats x2).
Rational functions are never reduced; equality goes through
cross-multiplication, which keeps us out of multivariate gcd territory.
"""

from __future__ import annotations

from typing import Dict, Iterable, Optional, Sequence, Tuple

from .fields import ExactError, FieldSpec, QQ, Scalar, rational_from_string

TERM_LIMIT = 10 ** 6


class ResourceError(RuntimeError):
    """Raised when a polynomial operation exceeds the desk-scale term cap."""


def _grlex_key(expo: Tuple[int, ...]):
    # sort key for descending graded lex: bigger total degree first, then
    # lexicographically larger exponent vector first
    return (-sum(expo), tuple(-e for e in expo))


class MultiPoly:
    __slots__ = ("field", "nvars", "terms")

    def __init__(self, field: FieldSpec, nvars: int,
                 terms: Optional[Dict[Tuple[int, ...], Scalar]] = None):
        self.field = field
        self.nvars = nvars
        clean = {}
        if terms:
            if len(terms) > TERM_LIMIT:
                raise ResourceError("polynomial exceeds %d terms" % TERM_LIMIT)
            for e, c in terms.items():
                if len(e) != nvars:
                    raise ExactError("exponent vector length mismatch")
                if not field.is_zero(c):
                    clean[tuple(e)] = c
        self.terms = clean

    # -- constructors -------------------------------------------------------

    @staticmethod
    def const(field: FieldSpec, nvars: int, c) -> "MultiPoly":
        if not isinstance(c, tuple):
            c = field.from_rational(c)
        return MultiPoly(field, nvars, {(0,) * nvars: c})

    @staticmethod
    def zero(field: FieldSpec, nvars: int) -> "MultiPoly":
        return MultiPoly(field, nvars, {})

    @staticmethod
    def var(field: FieldSpec, nvars: int, i: int) -> "MultiPoly":
        e = [0] * nvars
        e[i] = 1
        return MultiPoly(field, nvars, {tuple(e): field.one()})

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return all(sum(e) == 0 for e in self.terms)

    def constant_value(self) -> Scalar:
        if self.is_zero():
            return self.field.zero()
        if not self.is_constant():
            raise ExactError("polynomial is not constant")
        return next(iter(self.terms.values()))

    def total_degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def variables(self) -> set:
        out = set()
        for e in self.terms:
            for i, k in enumerate(e):
                if k:
                    out.add(i)
        return out

    # -- ring operations -------------------------------------------------------

    def _binop(self, other: "MultiPoly", sub: bool) -> "MultiPoly":
        f = self.field
        out = dict(self.terms)
        for e, c in other.terms.items():
            cur = out.get(e)
            nc = (f.sub(cur, c) if sub else f.add(cur, c)) if cur is not None \
                else (f.neg(c) if sub else c)
            if f.is_zero(nc):
                out.pop(e, None)
            else:
                out[e] = nc
        return MultiPoly(f, self.nvars, out)

    def __add__(self, other: "MultiPoly") -> "MultiPoly":
        return self._binop(other, sub=False)

    def __sub__(self, other: "MultiPoly") -> "MultiPoly":
        return self._binop(other, sub=True)

    def __neg__(self) -> "MultiPoly":
        f = self.field
        return MultiPoly(f, self.nvars, {e: f.neg(c) for e, c in self.terms.items()})

    def __mul__(self, other: "MultiPoly") -> "MultiPoly":
        f = self.field
        if len(self.terms) * len(other.terms) > TERM_LIMIT:
            raise ResourceError("product exceeds term cap")
        out: Dict[Tuple[int, ...], Scalar] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                c = f.mul(c1, c2)
                cur = out.get(e)
                nc = f.add(cur, c) if cur is not None else c
                if f.is_zero(nc):
                    out.pop(e, None)
                else:
                    out[e] = nc
        return MultiPoly(f, self.nvars, out)

    def scale(self, c: Scalar) -> "MultiPoly":
        f = self.field
        if f.is_zero(c):
            return MultiPoly.zero(f, self.nvars)
        return MultiPoly(f, self.nvars, {e: f.mul(c, v) for e, v in self.terms.items()})

    def __pow__(self, k: int) -> "MultiPoly":
        if k < 0:
            raise ExactError("negative power of a polynomial")
        out = MultiPoly.const(self.field, self.nvars, self.field.one())
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base if k > 1 else base
            k >>= 1
        return out

    def __eq__(self, other):
        return (isinstance(other, MultiPoly) and self.field == other.field
                and self.nvars == other.nvars and self.terms == other.terms)

    def __hash__(self):
        return hash((self.nvars, tuple(sorted(self.terms.items(), key=lambda t: _grlex_key(t[0])))))

    # -- evaluation & substitution ----------------------------------------------

    def eval(self, point: Sequence[Scalar]) -> Scalar:
        if len(point) != self.nvars:
            raise ExactError("point length mismatch")
        f = self.field
        acc = f.zero()
        for e, c in self.terms.items():
            term = c
            for i, k in enumerate(e):
                if k:
                    x = point[i]
                    for _ in range(k):
                        term = f.mul(term, x)
            acc = f.add(acc, term)
        return acc

    def substitute_zero(self, zero_vars: Iterable[int]) -> "MultiPoly":
        zs = set(zero_vars)
        out = {e: c for e, c in self.terms.items()
               if not any(e[i] for i in zs)}
        return MultiPoly(self.field, self.nvars, out)

    def substitute(self, assignment: Dict[int, "MultiPoly"]) -> "MultiPoly":
        """Substitute polynomials for the given variables (others stay)."""
        f = self.field
        acc = MultiPoly.zero(f, self.nvars)
        for e, c in self.terms.items():
            term = MultiPoly(f, self.nvars,
                             {tuple(0 if i in assignment else k for i, k in enumerate(e)): c})
            for i, k in enumerate(e):
                if k and i in assignment:
                    term = term * (assignment[i] ** k)
            acc = acc + term
        return acc

    def leading(self) -> Tuple[Tuple[int, ...], Scalar]:
        e = min(self.terms, key=_grlex_key)
        return e, self.terms[e]

    def divide_exact(self, divisor: "MultiPoly") -> Optional["MultiPoly"]:
        """Quotient self/divisor when the division is exact, else None."""
        f = self.field
        if divisor.is_zero():
            raise ZeroDivisionError("division by the zero polynomial")
        rem = self
        out: Dict[Tuple[int, ...], Scalar] = {}
        de, dc = divisor.leading()
        dc_inv = f.inv(dc)
        while not rem.is_zero():
            re, rc = rem.leading()
            q = tuple(a - b for a, b in zip(re, de))
            if any(x < 0 for x in q):
                return None
            qc = f.mul(rc, dc_inv)
            out[q] = qc
            rem = rem - divisor * MultiPoly(f, self.nvars, {q: qc})
        return MultiPoly(f, self.nvars, out)

    # -- text -------------------------------------------------------------------

    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        if not self.terms:
            return "0"
        f = self.field
        if names is None:
            names = ["x%d" % (i + 1) for i in range(self.nvars)]
        parts = []
        for e in sorted(self.terms, key=_grlex_key):
            c = self.terms[e]
            factors = []
            for i, k in enumerate(e):
                if k == 1:
                    factors.append(names[i])
                elif k > 1:
                    factors.append("%s^%d" % (names[i], k))
            if f.kind == "Q":
                cs = f.scalar_to_json(c)
            else:
                cs = "(" + ",".join(f.scalar_to_json(c)) + ")"
            parts.append("·".join([cs] + factors) if factors else cs)
        return " + ".join(parts)

    @staticmethod
    def parse(field: FieldSpec, nvars: int, text: str) -> "MultiPoly":
        """Parse the canonical textual form (Q coefficients only)."""
        if field.kind != "Q":
            raise ExactError("textual polynomials are parsed over Q only")
        s = text.replace(" ", "").replace("·", "*").replace("**", "^")
        if s in ("", "0"):
            return MultiPoly.zero(field, nvars)
        s = s.replace("-", "+-")
        if s.startswith("+"):
            s = s[1:]
        terms: Dict[Tuple[int, ...], Scalar] = {}
        for chunk in s.split("+"):
            if not chunk:
                continue
            neg = chunk.startswith("-")
            if neg:
                chunk = chunk[1:]
            coef = field.one()
            expo = [0] * nvars
            for factor in chunk.split("*"):
                if not factor:
                    continue
                if factor.startswith("x"):
                    if "^" in factor:
                        vpart, kpart = factor.split("^")
                        k = int(kpart)
                    else:
                        vpart, k = factor, 1
                    idx = int(vpart[1:]) - 1
                    if not 0 <= idx < nvars:
                        raise ExactError("variable index out of range: %s" % factor)
                    expo[idx] += k
                else:
                    coef = field.mul(coef, rational_from_string(factor))
            if neg:
                coef = field.neg(coef)
            key = tuple(expo)
            cur = terms.get(key)
            nc = field.add(cur, coef) if cur is not None else coef
            if field.is_zero(nc):
                terms.pop(key, None)
            else:
                terms[key] = nc
        return MultiPoly(field, nvars, terms)

    def __repr__(self):
        return "MultiPoly(%s)" % self.to_string()


def poly_eval(p: MultiPoly, point: Sequence[Scalar]) -> Scalar:
    return p.eval(point)


def poly_substitute_zero(p: MultiPoly, zero_vars: Iterable[int]) -> MultiPoly:
    return p.substitute_zero(zero_vars)


def poly_is_zero(p: MultiPoly) -> bool:
    return p.is_zero()


class RationalFn:
    """num/den with den != 0. Representations are unreduced by design."""

    __slots__ = ("num", "den")

    def __init__(self, num: MultiPoly, den: Optional[MultiPoly] = None):
        if den is None:
            den = MultiPoly.const(num.field, num.nvars, num.field.one())
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self.num = num
        self.den = den

    @staticmethod
    def zero(field: FieldSpec, nvars: int) -> "RationalFn":
        return RationalFn(MultiPoly.zero(field, nvars))

    @staticmethod
    def const(field: FieldSpec, nvars: int, c) -> "RationalFn":
        return RationalFn(MultiPoly.const(field, nvars, c))

    @staticmethod
    def var(field: FieldSpec, nvars: int, i: int) -> "RationalFn":
        return RationalFn(MultiPoly.var(field, nvars, i))

    def __add__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den + other.num * self.den,
                          self.den * other.den)

    def __sub__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.den - other.num * self.den,
                          self.den * other.den)

    def __neg__(self) -> "RationalFn":
        return RationalFn(-self.num, self.den)

    def __mul__(self, other: "RationalFn") -> "RationalFn":
        return RationalFn(self.num * other.num, self.den * other.den)

    def __truediv__(self, other: "RationalFn") -> "RationalFn":
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFn(self.num * other.den, self.den * other.num)

    def scale(self, c: Scalar) -> "RationalFn":
        return RationalFn(self.num.scale(c), self.den)

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def eq(self, other: "RationalFn") -> bool:
        return (self.num * other.den - other.num * self.den).is_zero()

    def substitute_zero(self, zero_vars: Iterable[int]) -> "RationalFn":
        den = self.den.substitute_zero(zero_vars)
        if den.is_zero():
            raise ZeroDivisionError("denominator vanishes under the guard substitution")
        return RationalFn(self.num.substitute_zero(zero_vars), den)

    def to_json(self):
        return {"num": self.num.to_string(), "den": self.den.to_string()}

    @staticmethod
    def from_json(field: FieldSpec, nvars: int, obj) -> "RationalFn":
        num = MultiPoly.parse(field, nvars, obj["num"])
        den = MultiPoly.parse(field, nvars, obj.get("den", "1"))
        return RationalFn(num, den)

    def __repr__(self):
        if self.den.is_constant() and not self.den.is_zero():
            c = self.den.constant_value()
            if self.den.field.is_zero(self.den.field.sub(c, self.den.field.one())):
                return "RationalFn(%s)" % self.num.to_string()
        return "RationalFn((%s)/(%s))" % (self.num.to_string(), self.den.to_string())
