"""Constructors for the named algebra families, their distinguished
derivations, and the built-in piecewise witnesses.

Families (all over Q unless extended later): the filiform chains L_n, Q_n,
R_n, the Witt quotients W_n, the characteristically nilpotent family F_n
(n >= 13) with its alpha-parameter table, free nilpotent algebras via Hall
bases, Heisenberg, almost abelian K^n x| K, the two counterexample products
K^n x| K^2 and f_{3,2} x| K, and Q^2 x| sl2 with the natural action.

Structure constants follow the adapted-basis convention [e1, e_i] = e_{i+1};
the Witt coefficients are c_{i,j} = 6(j-i) / (j(j-1) binom(j+i-2, i-2)).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import ExactError, FieldSpec, QQ
from .linalg import Matrix
from .liecore import BracketTable, LieAlgebra, semidirect
from .derive import Derivation, checked_derivation
from .hall import build_free_nilpotent
from .multipoly import MultiPoly, RationalFn
from .witness import PiecewiseWitness, chain_witness


@dataclass(frozen=True)
class FamilySpec:
    family: str
    n: Optional[int] = None
    extra: Optional[tuple] = None


def witt_coefficient(i: int, j: int) -> Fraction:
    """c_{i,j} for the adapted Witt basis, 2 <= i < j."""
    return Fraction(6 * (j - i), j * (j - 1) * comb(j + i - 2, i - 2))


def _table() -> Dict[Tuple[int, int], Dict[int, Fraction]]:
    return {}


def _set(table, i: int, j: int, p: int, c: Fraction):
    # 1-based in, 0-based out
    if c == 0:
        return
    key = (i - 1, j - 1)
    table.setdefault(key, {})[p - 1] = table.get(key, {}).get(p - 1, Fraction(0)) + c


def heisenberg() -> LieAlgebra:
    t = _table()
    _set(t, 1, 2, 3, Fraction(1))
    return LieAlgebra(QQ, 3, t, name="heis", meta={"family": "heis", "n": 3})


def family_L(n: int) -> LieAlgebra:
    if n < 3:
        raise ExactError("L_n needs n >= 3")
    t = _table()
    for i in range(2, n):
        _set(t, 1, i, i + 1, Fraction(1))
    return LieAlgebra(QQ, n, t, name="L:%d" % n, meta={"family": "L", "n": n})


def family_Q(n: int) -> LieAlgebra:
    if n < 6 or n % 2:
        raise ExactError("Q_n needs even n >= 6")
    t = _table()
    for i in range(2, n):
        _set(t, 1, i, i + 1, Fraction(1))
    for i in range(2, n // 2 + 1):
        _set(t, i, n - i + 1, n, Fraction((-1) ** (i + 1)))
    return LieAlgebra(QQ, n, t, name="Q:%d" % n, meta={"family": "Q", "n": n})


def family_R(n: int) -> LieAlgebra:
    if n < 5:
        raise ExactError("R_n needs n >= 5")
    t = _table()
    for i in range(2, n):
        _set(t, 1, i, i + 1, Fraction(1))
    for i in range(3, n - 1):
        _set(t, 2, i, i + 2, Fraction(1))
    return LieAlgebra(QQ, n, t, name="R:%d" % n, meta={"family": "R", "n": n})


def family_W(n: int) -> LieAlgebra:
    if n < 5:
        raise ExactError("W_n needs n >= 5")
    t = _table()
    for j in range(2, n):
        _set(t, 1, j, j + 1, Fraction(1))
    for i in range(2, n):
        for j in range(i + 1, n - i + 1):
            _set(t, i, j, i + j, witt_coefficient(i, j))
    return LieAlgebra(QQ, n, t, name="W:%d" % n, meta={"family": "W", "n": n})


def f_alpha(n: int, k: int, s: int) -> Fraction:
    """The alpha_{k,s} parameter table of F_n; zero off the five patterns."""
    val = Fraction(0)
    if k >= 2 and s == 2 * k + 1 and k <= (n - 1) // 2:
        val += Fraction(3, comb(k, 2) * comb(2 * k - 1, k - 1))
    if (k, s) == (3, n - 4):
        val += Fraction(1)
    if (k, s) == (4, n - 2):
        val += Fraction(1, 7) + Fraction(10, 21) * Fraction((n - 7) * (n - 8),
                                                            (n - 4) * (n - 5))
    if (k, s) == (4, n) and n == 13:
        val += Fraction(22105, 15246)
    if (k, s) == (5, n):
        val += (Fraction(1, 42)
                - Fraction(70 * (n - 8), 11 * (n - 2) * (n - 3) * (n - 4) * (n - 5))
                + Fraction(25, 99) * Fraction((n - 6) * (n - 7) * (n - 8),
                                              (n - 2) * (n - 3) * (n - 4))
                + Fraction(5, 66) * Fraction((n - 5) * (n - 6), (n - 2) * (n - 3))
                - Fraction(65, 1386) * Fraction((n - 7) * (n - 8), (n - 4) * (n - 5)))
    return val


def family_F(n: int) -> LieAlgebra:
    """The characteristically nilpotent filiform family, general alpha formula
    for every n >= 13 (the simplified n >= 14 two-term form is used only as a
    cross-check in the tests)."""
    if n < 13:
        raise ExactError("F_n needs n >= 13")
    t = _table()
    for j in range(2, n):
        _set(t, 1, j, j + 1, Fraction(1))
    for i in range(2, n + 1):
        for j in range(i + 1, n + 1):
            for r in range(1, n + 1):
                acc = Fraction(0)
                for ell in range((j - i - 1) // 2 + 1):
                    b = comb(j - i - ell - 1, ell) if j - i - ell - 1 >= ell else 0
                    if b == 0:
                        continue
                    a = f_alpha(n, i + ell, r - j + i + 2 * ell + 1)
                    if a:
                        acc += (-1) ** ell * b * a
                if acc:
                    _set(t, i, j, r, acc)
    return LieAlgebra(QQ, n, t, name="F:%d" % n, meta={"family": "F", "n": n})


def free_nilpotent_algebra(r: int, c: int) -> LieAlgebra:
    return build_free_nilpotent(r, c).algebra


def companion_matrix(coeffs: Sequence[Fraction], field: FieldSpec = QQ) -> Matrix:
    """Companion matrix of a monic polynomial given by its full coefficient
    tuple (lowest power first, leading 1)."""
    coeffs = [Fraction(c) for c in coeffs]
    if coeffs[-1] != 1:
        raise ExactError("companion matrix needs a monic polynomial")
    k = len(coeffs) - 1
    if k < 1:
        raise ExactError("companion matrix needs degree >= 1")
    z, o = field.zero(), field.one()
    m = [[z] * k for _ in range(k)]
    for i in range(1, k):
        m[i][i - 1] = o
    for i in range(k):
        m[i][k - 1] = field.from_rational(-coeffs[i])
    return Matrix(field, m, cols=k)


def block_diagonal(blocks: Sequence[Matrix], field: FieldSpec = QQ) -> Matrix:
    n = sum(b.rows for b in blocks)
    z = field.zero()
    m = [[z] * n for _ in range(n)]
    off = 0
    for b in blocks:
        for r in range(b.rows):
            for c in range(b.cols):
                m[off + r][off + c] = b.entries[r][c]
        off += b.rows
    return Matrix(field, m, cols=n)


def almost_abelian(action: Matrix, name: str = "") -> LieAlgebra:
    """K^n x| K with [t, e_i] = M e_i; basis e_1..e_n, t."""
    n = action.rows
    abelian = LieAlgebra(action.field, n, {}, name="K^%d" % n)
    g = semidirect(abelian, [action], None, name=name or "aa:%d" % n)
    g.meta.update({"family": "aa", "n": n + 1})
    return g


def example_3_2(n: int) -> LieAlgebra:
    """K^n x| K^2 with [s, e_i] = e_{i+1} and [t, e_i] = e_{i+2}."""
    if n < 3:
        raise ExactError("the K^n x| K^2 example needs n >= 3")
    f = QQ
    z, o = f.zero(), f.one()
    n1 = [[z] * n for _ in range(n)]
    n2 = [[z] * n for _ in range(n)]
    for i in range(n - 1):
        n1[i + 1][i] = o
    for i in range(n - 2):
        n2[i + 2][i] = o
    abelian = LieAlgebra(f, n, {}, name="K^%d" % n)
    g = semidirect(abelian, [Matrix(f, n1, cols=n), Matrix(f, n2, cols=n)],
                   None, name="ex32:%d" % n)
    g.meta.update({"family": "ex32", "n": n})
    return g


def example_3_3() -> LieAlgebra:
    """f_{3,2} x| K with the extra bracket [t, x1] = y3 (paper basis order
    x1, x2, x3, y1, y2, y3, t)."""
    f = QQ
    t = _table()
    _set(t, 1, 2, 4, Fraction(1))
    _set(t, 1, 3, 5, Fraction(1))
    _set(t, 2, 3, 6, Fraction(1))
    f32 = LieAlgebra(f, 6, t, name="f32-paper-basis")
    z = f.zero()
    act = [[z] * 6 for _ in range(6)]
    act[5][0] = f.one()  # t . x1 = y3
    g = semidirect(f32, [Matrix(f, act, cols=6)], None, name="ex33")
    g.meta.update({"family": "ex33", "n": 7})
    return g


def sl2_natural() -> LieAlgebra:
    """Q^2 x| sl2 with the natural 2-dimensional action; basis a1, a2, h, e, f."""
    f = QQ
    a = LieAlgebra(f, 2, {}, name="Q^2")
    one = f.one()
    rho_h = Matrix(f, [[one, f.zero()], [f.zero(), f.neg(one)]])
    rho_e = Matrix(f, [[f.zero(), one], [f.zero(), f.zero()]])
    rho_f = Matrix(f, [[f.zero(), f.zero()], [one, f.zero()]])
    sl2 = LieAlgebra(f, 3, {
        (0, 1): {1: Fraction(2)},
        (0, 2): {2: Fraction(-2)},
        (1, 2): {0: Fraction(1)},
    }, name="sl2")
    g = semidirect(a, [rho_h, rho_e, rho_f], sl2, name="sl2nat")
    g.meta.update({"family": "sl2nat", "n": 5})
    return g


# -- family dispatch ----------------------------------------------------------

def build_family(spec: FamilySpec) -> LieAlgebra:
    fam = spec.family
    if fam == "heis":
        return heisenberg()
    if fam == "L":
        return family_L(spec.n)
    if fam == "Q":
        return family_Q(spec.n)
    if fam == "R":
        return family_R(spec.n)
    if fam == "W":
        return family_W(spec.n)
    if fam == "F":
        return family_F(spec.n)
    if fam == "free":
        r, c = spec.extra
        return free_nilpotent_algebra(r, c)
    if fam == "aa":
        blocks = [companion_matrix(p) for p in spec.extra]
        return almost_abelian(block_diagonal(blocks))
    if fam == "ex32":
        return example_3_2(spec.n)
    if fam == "ex33":
        return example_3_3()
    if fam == "sl2nat":
        return sl2_natural()
    raise ExactError("unknown family %r" % fam)


def parse_family(text: str) -> FamilySpec:
    """CLI grammar: L:n Q:n R:n W:n F:n heis free:r,c aa:<poly[,poly...]>
    ex32:n ex33 sl2nat."""
    text = text.strip()
    if text == "heis":
        return FamilySpec("heis")
    if text == "ex33":
        return FamilySpec("ex33")
    if text == "sl2nat":
        return FamilySpec("sl2nat")
    if ":" not in text:
        raise ExactError("cannot parse family spec %r" % text)
    head, rest = text.split(":", 1)
    if head in ("L", "Q", "R", "W", "F", "ex32"):
        return FamilySpec(head, int(rest))
    if head == "free":
        r, c = rest.split(",")
        return FamilySpec("free", extra=(int(r), int(c)))
    if head == "aa":
        from .fields import parse_monic_poly
        polys = tuple(parse_monic_poly(p) for p in rest.split(","))
        return FamilySpec("aa", extra=polys)
    raise ExactError("cannot parse family spec %r" % text)


# -- named derivations --------------------------------------------------------

def named_derivation(g: LieAlgebra, name: str) -> Derivation:
    fam = g.meta.get("family")
    n = g.dim
    f = g.field
    z, o = f.zero(), f.one()

    def empty():
        return [[z] * n for _ in range(n)]

    m = None
    if fam == "Q":
        if name == "t0":
            m = empty()
            m[n - 1][1] = o
        elif name == "t1":
            m = empty()
            m[0][0] = o
            m[1][0] = o
            for i in range(3, n):
                m[i - 1][i - 1] = f.from_rational(i - 2)
            m[n - 1][n - 1] = f.from_rational(n - 3)
        elif name == "t2":
            m = empty()
            m[1][0] = f.neg(o)
            for i in range(2, n):
                m[i - 1][i - 1] = o
            m[n - 1][n - 1] = f.from_rational(2)
        elif name.startswith("h_"):
            s = int(name[2:])
            if not 2 <= s <= n // 2 - 1:
                raise ExactError("h_s needs 2 <= s <= n/2 - 1")
            m = empty()
            for i in range(2, n + 2 - 2 * s):
                m[i - 2 + 2 * s][i - 1] = o
    elif fam in ("W", "F"):
        if name == "t1":
            m = empty()
            m[n - 1][1] = o
        elif name == "t2":
            m = empty()
            m[n - 2][1] = o
            m[n - 1][2] = o
        elif name == "t3":
            m = empty()
            m[n - 3][1] = o
            m[n - 2][2] = o
            m[n - 1][3] = o
        elif name == "h":
            if fam == "F":
                raise ExactError("h(e_i) = i e_i is not a derivation of this family")
            m = empty()
            for i in range(n):
                m[i][i] = f.from_rational(i + 1)
    elif fam == "R":
        if name == "E_n2":
            m = empty()
            m[n - 1][1] = o
    elif fam == "ex32":
        if name == "D":
            m = empty()
            m[n - 3][n - 1] = o  # t-column maps to the top abelian vector e_(n-2)
    elif fam == "ex33":
        if name == "D":
            m = empty()
            m[3][0] = o
            m[4][0] = o
    if m is None:
        raise ExactError("unknown derivation %r for family %r" % (name, fam))
    return checked_derivation(g, Matrix(f, m, cols=n))


# -- built-in witnesses --------------------------------------------------------

def _rf_const(field: FieldSpec, nvars: int, c) -> RationalFn:
    return RationalFn.const(field, nvars, c)


def _rf_ratio(field: FieldSpec, nvars: int, num_terms, den_terms) -> RationalFn:
    """num_terms/den_terms given as {exponent-tuple: rational}."""
    num = MultiPoly(field, nvars, {e: field.from_rational(c) for e, c in num_terms.items()})
    den = MultiPoly(field, nvars, {e: field.from_rational(c) for e, c in den_terms.items()})
    return RationalFn(num, den)


def _e(nvars: int, *pairs) -> tuple:
    expo = [0] * nvars
    for var, k in pairs:
        expo[var] += k
    return tuple(expo)


def paper_witness(g: LieAlgebra, name: str) -> PiecewiseWitness:
    """The transcribed witness map for (family, derivation name).

    W and F share the same formulas (they only reference the Witt
    coefficients); whether they certify is decided by verify_witness.
    """
    fam = g.meta.get("family")
    n = g.dim
    f = g.field
    zero = RationalFn.zero(f, n)

    def zmaps():
        return [zero] * n

    if fam in ("W", "F"):
        nn = g.meta["n"]
        c = witt_coefficient
        if name == "t1" and (fam == "W" and nn >= 5 or fam == "F" and nn >= 13):
            m1 = zmaps()
            m1[n - 2] = _rf_ratio(f, n, {_e(n, (1, 1)): 1}, {_e(n, (0, 1)): 1})
            m2 = zmaps()
            m2[n - 3] = _rf_const(f, n, 1 / c(2, nn - 2))
            return chain_witness(f, n, [(0, m1), (None, m2)])
        if name == "t2" and (fam == "W" and nn >= 7 or fam == "F" and nn >= 13):
            m1 = zmaps()
            m1[n - 3] = _rf_ratio(f, n, {_e(n, (1, 1)): 1}, {_e(n, (0, 1)): 1})
            m1[n - 2] = _rf_ratio(f, n,
                                  {_e(n, (2, 1), (0, 1)): 1,
                                   _e(n, (1, 2)): -c(2, nn - 2)},
                                  {_e(n, (0, 2)): 1})
            m2 = zmaps()
            m2[n - 4] = _rf_const(f, n, 1 / c(2, nn - 3))
            m2[n - 3] = _rf_ratio(f, n,
                                  {_e(n, (2, 1)): (c(2, nn - 3) - c(3, nn - 3))},
                                  {_e(n, (1, 1)): c(2, nn - 2) * c(2, nn - 3)})
            m3 = zmaps()
            m3[n - 4] = _rf_const(f, n, 1 / c(3, nn - 3))
            return chain_witness(f, n, [(0, m1), (1, m2), (None, m3)])
        if name == "t3" and (fam == "W" and nn >= 9 or fam == "F" and nn >= 13):
            c2n2, c2n3, c2n4 = c(2, nn - 2), c(2, nn - 3), c(2, nn - 4)
            c3n3, c3n4, c4n4 = c(3, nn - 3), c(3, nn - 4), c(4, nn - 4)
            rho1 = zmaps()
            rho1[n - 4] = _rf_ratio(f, n, {_e(n, (1, 1)): 1}, {_e(n, (0, 1)): 1})
            rho1[n - 3] = _rf_ratio(f, n,
                                    {_e(n, (2, 1), (0, 1)): 1, _e(n, (1, 2)): -c2n3},
                                    {_e(n, (0, 2)): 1})
            rho1[n - 2] = _rf_ratio(f, n,
                                    {_e(n, (3, 1), (0, 2)): 1,
                                     _e(n, (1, 1), (2, 1), (0, 1)): -(c2n2 + c3n3),
                                     _e(n, (1, 3)): c2n2 * c2n3},
                                    {_e(n, (0, 3)): 1})
            rho2 = zmaps()
            rho2[n - 5] = _rf_const(f, n, 1 / c2n4)
            rho2[n - 4] = _rf_ratio(f, n, {_e(n, (2, 1)): (c2n4 - c3n4)},
                                    {_e(n, (1, 1)): c2n3 * c2n4})
            rho2[n - 3] = _rf_ratio(f, n,
                                    {_e(n, (3, 1), (1, 1)): (c2n4 - c4n4) * c2n3,
                                     _e(n, (2, 2)): -(c2n4 - c3n4) * c3n3},
                                    {_e(n, (1, 2)): c2n2 * c2n3 * c2n4})
            rho3 = zmaps()
            rho3[n - 5] = _rf_const(f, n, 1 / c3n4)
            rho3[n - 4] = _rf_ratio(f, n, {_e(n, (3, 1)): (c3n4 - c4n4)},
                                    {_e(n, (2, 1)): c3n3 * c3n4})
            rho4 = zmaps()
            rho4[n - 5] = _rf_const(f, n, 1 / c4n4)
            return chain_witness(f, n, [(0, rho1), (1, rho2), (2, rho3), (None, rho4)])
    if fam == "R" and name == "E_n2":
        m1 = zmaps()
        m1[n - 2] = _rf_ratio(f, n, {_e(n, (1, 1)): 1}, {_e(n, (0, 1)): 1})
        m2 = zmaps()
        m2[n - 3] = _rf_const(f, n, 1)
        return chain_witness(f, n, [(0, m1), (None, m2)])
    if fam == "ex32" and name == "D":
        nn = g.meta["n"]  # abelian part dimension; basis e_1..e_nn, s, t
        beta, gamma = nn, nn + 1
        m1 = zmaps()
        m1[nn - 2] = _rf_ratio(f, n, {_e(n, (gamma, 1)): 1}, {_e(n, (beta, 1)): 1})
        m2 = zmaps()
        m2[nn - 3] = _rf_const(f, n, 1)
        return chain_witness(f, n, [(beta, m1), (None, m2)])
    if fam == "ex33" and name == "D":
        one = _rf_const(f, n, 1)
        m1 = zmaps()
        m1[1] = one
        m1[2] = one
        m1[6] = _rf_ratio(f, n, {_e(n, (1, 1)): 1, _e(n, (2, 1)): -1}, {_e(n, (0, 1)): 1})
        m2 = zmaps()
        return chain_witness(f, n, [(0, m1), (None, m2)])
    raise ExactError("no built-in witness for (%r, %r)" % (fam, name))


def default_witness_names(g: LieAlgebra) -> List[str]:
    fam = g.meta.get("family")
    nn = g.meta.get("n", g.dim)
    if fam == "W":
        return [t for t, lo in (("t1", 5), ("t2", 7), ("t3", 9)) if nn >= lo]
    if fam == "F":
        return ["t1", "t2", "t3"]
    if fam == "R":
        return ["E_n2"]
    if fam in ("ex32", "ex33"):
        return ["D"]
    return []
