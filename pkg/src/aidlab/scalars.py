"""Extension and restriction of scalars, the quadratic splitting, derivation
descent, and the scaled-derivation construction over a field extension.

For K = Q[s]/(p) of degree n, a K-algebra of dimension r restricts to a
Q-algebra of dimension n*r on the basis {s^m e_i}, ordered m-major (the
plain e-block first, then the s e-block, and so on).

The scaled construction takes D with one-dimensional central image inside
AID(g_K), a basis vector y outside ker(D), and produces the n^2 maps
s^(j-1) D_i on the restricted algebra, each certified by a piecewise
witness whose denominators are norm forms of K-coordinate blocks.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import ExactError, FieldSpec, QQ, Scalar
from .linalg import Matrix, Subspace, solve
from .liecore import BracketTable, Element, LieAlgebra, direct_sum
from .derive import (Derivation, checked_derivation, derivation_space, flatten,
                     is_derivation, unflatten)
from .multipoly import MultiPoly, RationalFn
from .witness import (GuardGroup, PiecewiseWitness, WitnessPiece, norm_form,
                      poly_adjugate_column, verify_witness)


@dataclass(frozen=True)
class ScalarChangeContext:
    base: FieldSpec
    ext: FieldSpec

    def __post_init__(self):
        if self.base.kind != "Q":
            raise ExactError("only Q is supported as the base field")
        if self.ext.kind != "ext":
            raise ExactError("the extension side must be a proper extension of Q")

    @property
    def degree(self) -> int:
        return self.ext.degree

    @staticmethod
    def quadratic(d) -> "ScalarChangeContext":
        d = Fraction(d)
        return ScalarChangeContext(QQ, FieldSpec.extension([-d, Fraction(0), Fraction(1)]))

    @staticmethod
    def from_minpoly(coeffs) -> "ScalarChangeContext":
        return ScalarChangeContext(QQ, FieldSpec.extension(coeffs))


def extend_scalars(g: LieAlgebra, ctx: ScalarChangeContext) -> LieAlgebra:
    """Same structure constants, scalars embedded into K."""
    if g.field != ctx.base:
        raise ExactError("algebra field does not match the context base")
    K = ctx.ext
    table: BracketTable = {}
    for (i, j), vec in g.brackets.items():
        table[(i, j)] = {p: K.from_rational(c) for p, c in vec.items()}
    out = LieAlgebra(K, g.dim, table, name="%s (x) K" % (g.name or "g"),
                     check_jacobi=False, meta=dict(g.meta))
    out.meta["extended_from"] = g.name
    return out


def restrict_scalars(g: LieAlgebra, ctx: ScalarChangeContext) -> LieAlgebra:
    """View a K-algebra as a Q-algebra of dimension n*dim on {s^m e_i}."""
    K = ctx.ext
    if g.field != K:
        raise ExactError("algebra field does not match the context extension")
    n = ctx.degree
    r = g.dim
    s = K.gen()
    table: BracketTable = {}
    for (i, j), vec in g.brackets.items():
        for mi in range(n):
            for mj in range(n):
                # [s^mi e_i, s^mj e_j] = s^(mi+mj) [e_i, e_j]
                power = K.one()
                for _ in range(mi + mj):
                    power = K.mul(power, s)
                a_idx = mi * r + i
                b_idx = mj * r + j
                if a_idx == b_idx:
                    continue
                entry: Dict[int, Fraction] = {}
                for p, c in vec.items():
                    coeffs = K.coeffs(K.mul(power, c))
                    for m, q in enumerate(coeffs):
                        if q:
                            entry[m * r + p] = entry.get(m * r + p, Fraction(0)) + q
                entry = {k: v for k, v in entry.items() if v}
                if not entry:
                    continue
                if a_idx < b_idx:
                    key, sign = (a_idx, b_idx), 1
                else:
                    key, sign = (b_idx, a_idx), -1
                tgt = table.setdefault(key, {})
                for k, v in entry.items():
                    nv = tgt.get(k, Fraction(0)) + (v if sign > 0 else -v)
                    if nv:
                        tgt[k] = nv
                    else:
                        tgt.pop(k, None)
    table = {k: v for k, v in table.items() if v}
    out = LieAlgebra(QQ, n * r, table, name="%s restricted" % (g.name or "g"))
    out.meta.update({"restricted_from": g.name, "block_dim": r,
                     "minpoly": ctx.ext.minpoly, "source_meta": dict(g.meta)})
    return out


def kvar_block(ctx: ScalarChangeContext, r: int, i: int) -> Tuple[int, ...]:
    """Restricted-basis coordinate indices carrying the K-coordinate X_i."""
    return tuple(m * r + i for m in range(ctx.degree))


def quadratic_split(g_prime: LieAlgebra, ctx: ScalarChangeContext
                    ) -> Tuple[Matrix, LieAlgebra]:
    """The isomorphism g'_K ~ g_K (+) g_K for [K:Q] = 2, K = Q(sqrt(d)).

    ``g_prime`` must be a restriction of scalars (the e/f block pattern is
    verified).  Returns the basis-change matrix over K and the target sum;
    bracket preservation is checked exactly on all basis pairs.
    """
    if ctx.degree != 2:
        raise ExactError("the quadratic splitting needs a degree-2 extension")
    mp = ctx.ext.minpoly
    if mp[1] != 0:
        raise ExactError("context minpoly must have the pure form s^2 - d")
    d = -mp[0]
    if g_prime.dim % 2:
        raise ExactError("restricted algebra must have even dimension")
    r = g_prime.dim // 2
    K = ctx.ext
    q = QQ

    # recover the base table from the e-block and verify the pattern
    base_table: BracketTable = {}
    for i in range(r):
        for j in range(i + 1, r):
            vec = g_prime.bracket_basis(i, j)
            if any(p >= r for p in vec):
                raise ExactError("e-block brackets leave the e-block")
            if vec:
                base_table[(i, j)] = dict(vec)

    def expect(i, j):
        return base_table.get((i, j), {}) if i < j else \
            {p: -c for p, c in base_table.get((j, i), {}).items()}

    for i in range(r):
        for j in range(r):
            if i == j:
                continue
            ef = g_prime.bracket_basis(i, r + j)
            want = {r + p: c for p, c in expect(i, j).items()}
            if ef != want:
                raise ExactError("input does not have the restriction pattern ([e,f])")
            if i < j:
                ff = g_prime.bracket_basis(r + i, r + j)
                want_ff = {p: d * c for p, c in expect(i, j).items()}
                if ff != want_ff:
                    raise ExactError("input does not have the restriction pattern ([f,f])")

    g_base = LieAlgebra(q, r, base_table, name="base of %s" % g_prime.name,
                        check_jacobi=False)
    gK = extend_scalars(g_base, ctx)
    target = direct_sum(gK, gK)
    gK_prime = extend_scalars_generic(g_prime, ctx)

    alpha = K.gen()
    z, o = K.zero(), K.one()
    cols = []
    for i in range(r):  # phi(e_i) = a_i + b_i
        col = [z] * (2 * r)
        col[i] = o
        col[r + i] = o
        cols.append(col)
    for i in range(r):  # phi(f_i) = alpha a_i - alpha b_i
        col = [z] * (2 * r)
        col[i] = alpha
        col[r + i] = K.neg(alpha)
        cols.append(col)
    phi = Matrix(K, [[cols[j][p] for j in range(2 * r)] for p in range(2 * r)],
                 cols=2 * r)
    for i in range(2 * r):
        for j in range(i + 1, 2 * r):
            vec = gK_prime.bracket_basis(i, j)
            lhs = [z] * (2 * r)
            for p, c in vec.items():
                col = phi.column(p)
                for t in range(2 * r):
                    lhs[t] = K.add(lhs[t], K.mul(c, col[t]))
            rhs = target.bracket_coords(phi.column(i), phi.column(j))
            for t in range(2 * r):
                if not K.is_zero(K.sub(lhs[t], rhs[t])):
                    raise ExactError("quadratic splitting failed verification (internal)")
    return phi, target


def extend_scalars_generic(g: LieAlgebra, ctx: ScalarChangeContext) -> LieAlgebra:
    """extend_scalars for any Q-algebra (no restriction metadata required)."""
    K = ctx.ext
    table: BracketTable = {}
    for (i, j), vec in g.brackets.items():
        table[(i, j)] = {p: K.from_rational(c) for p, c in vec.items()}
    return LieAlgebra(K, g.dim, table, name="%s (x) K" % (g.name or "g"),
                      check_jacobi=False, meta=dict(g.meta))


def descend_derivation(deriv: Derivation, ctx: ScalarChangeContext,
                       g_base: LieAlgebra) -> List[Derivation]:
    """Components D_i of D restricted to the base algebra along the power
    basis: D|_base = D_1 + s D_2 + ... + s^(n-1) D_n, each a derivation."""
    gK = deriv.algebra
    K = ctx.ext
    if gK.field != K or g_base.field != ctx.base or g_base.dim != gK.dim:
        raise ExactError("descent context mismatch")
    n = ctx.degree
    r = gK.dim
    comps = []
    for m in range(n):
        mat = [[K.coeffs(deriv.matrix.entries[p][c])[m] for c in range(r)]
               for p in range(r)]
        comps.append(checked_derivation(g_base, Matrix(QQ, mat, cols=r)))
    return comps


def in_c_class(deriv: Derivation) -> bool:
    """D(g) one-dimensional and contained in Z(g); the AID membership evidence
    is the caller's burden."""
    g = deriv.algebra
    f = g.field
    from .linalg import rank
    if rank(deriv.matrix) != 1:
        return False
    z = g.center()
    for c in range(g.dim):
        col = deriv.matrix.column(c)
        if any(not f.is_zero(a) for a in col) and not z.contains(col):
            return False
    return True


@dataclass
class ScaledFamily:
    source: Derivation
    y_index: int
    z_vector: Tuple[Scalar, ...]
    restricted: LieAlgebra
    maps: List[Tuple[Tuple[int, int], Derivation]]  # ((i, j), s^(j-1) D_i)
    witnesses: List[PiecewiseWitness]
    span: Subspace
    span_inn: Subspace
    inner_flags: List[bool]
    source_inner: bool
    dichotomy_ok: bool


def build_scaled_family(gK: LieAlgebra, deriv: Derivation,
                        ctx: ScalarChangeContext,
                        phi_D: Optional[PiecewiseWitness] = None,
                        y_index: Optional[int] = None,
                        restricted: Optional[LieAlgebra] = None) -> ScaledFamily:
    """All n^2 maps s^(j-1) D_i with verified witnesses, their span A, and the
    A-intersect-Inn dichotomy.

    ``phi_D`` certifies D in AID(g_K); for inner D it is derived automatically
    (the constant map -w with D = ad(w)).  ``y_index`` defaults to the first
    basis vector outside ker(D); the construction needs D supported on that
    single column.
    """
    K = ctx.ext
    f = gK.field
    if f != K:
        raise ExactError("scaled construction starts from an algebra over K")
    n = ctx.degree
    r = gK.dim

    if y_index is None:
        y_index = next((c for c in range(r)
                        if any(not K.is_zero(a) for a in deriv.matrix.column(c))), None)
        if y_index is None:
            raise ExactError("zero map has no admissible y")
    zvec = deriv.matrix.column(y_index)
    if all(K.is_zero(a) for a in zvec):
        raise ExactError("y lies in ker(D)")
    for c in range(r):
        if c != y_index and any(not K.is_zero(a) for a in deriv.matrix.column(c)):
            raise ExactError("D must be supported on the single column of y")
    if not in_c_class(deriv):
        raise ExactError("D is not in the C-class (rank one, central image)")

    inner_w = _express_inner(deriv)
    if phi_D is None:
        if inner_w is None:
            raise ExactError("non-inner D needs an explicit certifying witness")
        phi_D = _constant_witness(gK, [K.neg(a) for a in inner_w])
    verdict = verify_witness(gK, deriv, phi_D)
    if not verdict.verified:
        raise ExactError("the certifying witness for D does not verify over K")

    gq = restricted if restricted is not None else restrict_scalars(gK, ctx)
    N = gq.dim
    s = K.gen()

    maps: List[Tuple[Tuple[int, int], Derivation]] = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            # s^(j-1) D_i: column (i-1, y) carries the coordinates of s^(i+j-2) z
            power = K.one()
            for _ in range(i + j - 2):
                power = K.mul(power, s)
            image = [K.mul(power, a) for a in zvec]
            mat = [[QQ.zero()] * N for _ in range(N)]
            col = (i - 1) * r + y_index
            for p in range(r):
                coeffs = K.coeffs(image[p])
                for m, qv in enumerate(coeffs):
                    if qv:
                        mat[m * r + p][col] = qv
            dmat = Matrix(QQ, mat, cols=N)
            if not is_derivation(gq, dmat):
                raise ExactError("scaled map failed the Leibniz identity (internal)")
            maps.append(((i, j), Derivation(gq, dmat)))

    witnesses = [scaled_witness(gK, ctx, phi_D, y_index, zvec, i, j, gq)
                 for (i, j), _ in maps]
    for ((i, j), dm), wit in zip(maps, witnesses):
        wv = verify_witness(gq, dm, wit)
        if not wv.verified:
            raise ExactError("scaled witness failed for s^%d D_%d: %r"
                             % (j - 1, i, wv.failures[:1]))

    flats = [flatten(dm.matrix) for _, dm in maps]
    span = Subspace(QQ, N * N, flats)
    ds = derivation_space(gq)
    span_inn = span.intersect(ds.inn)
    inner_flags = [ds.inn.contains(fl) for fl in flats]
    source_inner = inner_w is not None
    expected = n if source_inner else 0
    dichotomy_ok = span.dim == n * n and span_inn.dim == expected
    return ScaledFamily(deriv, y_index, zvec, gq, maps, witnesses, span,
                        span_inn, inner_flags, source_inner, dichotomy_ok)


def _express_inner(deriv: Derivation) -> Optional[List[Scalar]]:
    """Coordinates w with D = ad(w), or None if D is not inner."""
    g = deriv.algebra
    f = g.field
    n = g.dim
    cols = []
    for i in range(n):
        e = [f.zero()] * n
        e[i] = f.one()
        cols.append(flatten(g.ad_matrix(e)))
    m = Matrix(f, [[cols[i][k] for i in range(n)] for k in range(n * n)], cols=n)
    return None if (sol := solve(m, list(deriv.flat()))) is None else list(sol)


def _constant_witness(g: LieAlgebra, value: Sequence[Scalar]) -> PiecewiseWitness:
    f = g.field
    n = g.dim
    maps = tuple(RationalFn.const(f, n, v) for v in value)
    return PiecewiseWitness(f, n, (), (WitnessPiece(frozenset(), (), maps),))


def scaled_witness(gK: LieAlgebra, ctx: ScalarChangeContext,
                   phi_D: PiecewiseWitness, y_index: int, zvec,
                   i: int, j: int, gq: LieAlgebra) -> PiecewiseWitness:
    """Witness for s^(j-1) D_i over the restricted algebra.

    On the stratum a != 0 (a the K-coordinate of y) the map is
    (c_i(a) s^(i+j-2) / a) phi_D, with 1/a and any 1/X_nu of phi_D expanded
    through the adjugate-over-norm construction, so every denominator is a
    norm form certified by the guard groups.
    """
    K = ctx.ext
    n = ctx.degree
    r = gK.dim
    N = gq.dim
    minpoly = tuple(ctx.ext.minpoly)

    groups: List[GuardGroup] = [GuardGroup(kvar_block(ctx, r, y_index), "norm", minpoly)]
    group_of_block: Dict[int, int] = {y_index: 0}

    def block_group(idx: int) -> int:
        if idx not in group_of_block:
            groups.append(GuardGroup(kvar_block(ctx, r, idx), "norm", minpoly))
            group_of_block[idx] = len(groups) - 1
        return group_of_block[idx]

    # symbolic K-coordinates: X_t = sum_m s^m x_(m*r + t)
    def kcoord_polys(idx: int) -> List[MultiPoly]:
        return [MultiPoly.var(QQ, N, m * r + idx) for m in range(n)]

    def knumber_expand(block_polys: List[MultiPoly]):
        """Multiplication matrix, norm, and adjugate column of a symbolic
        K-element given by its coefficient polynomials."""
        red = K._power_table()
        cols = []
        for jj in range(n):
            col = [MultiPoly.zero(QQ, N) for _ in range(n)]
            for m in range(n):
                row = red[m + jj]
                for t in range(n):
                    if row[t]:
                        col[t] = col[t] + block_polys[m].scale(QQ.from_rational(row[t]))
            cols.append(col)
        mat = [[cols[jj][t] for jj in range(n)] for t in range(n)]
        # M adj_col = det e_0, so 1/a has coordinates adj / det
        adj = poly_adjugate_column(QQ, N, mat)
        det = MultiPoly.zero(QQ, N)
        for t in range(n):
            det = det + mat[0][t] * adj[t]
        return mat, det, adj

    # K-coefficient polynomial in the restricted variables: list of n rational
    # components per power of s
    def kpoly_zero():
        return [MultiPoly.zero(QQ, N) for _ in range(n)]

    def kpoly_scale(kp, scalar):
        coeffs = K.coeffs(scalar)
        out = kpoly_zero()
        red = K._power_table()
        for m1 in range(n):
            if kp[m1].is_zero():
                continue
            for m2 in range(n):
                if not coeffs[m2]:
                    continue
                row = red[m1 + m2]
                for t in range(n):
                    if row[t]:
                        out[t] = out[t] + kp[m1].scale(coeffs[m2] * row[t])
        return out

    def kpoly_mul(kp1, kp2):
        red = K._power_table()
        out = kpoly_zero()
        for m1 in range(n):
            if kp1[m1].is_zero():
                continue
            for m2 in range(n):
                if kp2[m2].is_zero():
                    continue
                prod = kp1[m1] * kp2[m2]
                row = red[m1 + m2]
                for t in range(n):
                    if row[t]:
                        out[t] = out[t] + prod.scale(QQ.from_rational(row[t]))
        return out

    def kpoly_from_K_multipoly(p: MultiPoly):
        """Expand a polynomial over K in K-variables X_1..X_r into power-basis
        components over Q in the restricted variables."""
        out = kpoly_zero()
        one = [MultiPoly.const(QQ, N, 1)] + [MultiPoly.zero(QQ, N)] * (n - 1)
        for expo, coeff in p.terms.items():
            term = one
            for var_idx, k in enumerate(expo):
                if not k:
                    continue
                block = kcoord_polys(var_idx)
                for _ in range(k):
                    term = kpoly_mul(term, block)
            term = kpoly_scale(term, coeff)
            out = [a + b for a, b in zip(out, term)]
        return out

    a_polys = kcoord_polys(y_index)
    _, a_norm, a_adj = knumber_expand(a_polys)
    ci_poly = a_polys[i - 1]  # c_i(a)

    s_power = K.one()
    for _ in range(i + j - 2):
        s_power = K.mul(s_power, K.gen())

    pieces: List[WitnessPiece] = []
    for kp in phi_D.pieces:
        zerosK = kp.zeros
        if y_index in zerosK:
            # a = 0 on that stratum; the trailing zero piece covers it
            continue
        zeros = frozenset(m * r + c for c in zerosK for m in range(n))
        nonzero = [0]
        nu = None
        if kp.nonzero:
            # phi_D guards use single K-coordinate groups only
            if len(kp.nonzero) != 1:
                raise ExactError("phi_D pieces must guard at most one coordinate")
            grp = phi_D.groups[kp.nonzero[0]]
            if grp.kind != "coord":
                raise ExactError("phi_D guards must be single K-coordinates")
            nu = grp.coords[0]
            gi = block_group(nu)
            if gi not in nonzero:
                nonzero.append(gi)
        comps = [RationalFn.zero(QQ, N) for _ in range(N)]
        if kp.maps and any(not mfn.num.is_zero() for mfn in kp.maps):
            nu_polys = kcoord_polys(nu) if nu is not None else None
            nu_data = knumber_expand(nu_polys) if nu is not None else None
            for comp_idx in range(r):
                mfn = kp.maps[comp_idx]
                if mfn.num.is_zero():
                    continue
                num_sub = mfn.num.substitute_zero(zerosK)
                den_sub = mfn.den.substitute_zero(zerosK)
                if num_sub.is_zero():
                    continue
                # den must be const * X_nu^p
                p_pow, den_const = _monomial_in_coord(den_sub, nu)
                num_k = kpoly_from_K_multipoly(num_sub)
                num_k = kpoly_scale(num_k, K.inv(den_const))
                num_k = kpoly_scale(num_k, s_power)
                num_k = [q * ci_poly for q in num_k]
                num_k = kpoly_mul(num_k, list(a_adj))
                den_poly = a_norm
                if p_pow:
                    _, nu_norm, nu_adj = nu_data
                    adj_pow = [MultiPoly.const(QQ, N, 1)] + [MultiPoly.zero(QQ, N)] * (n - 1)
                    for _ in range(p_pow):
                        adj_pow = kpoly_mul(adj_pow, list(nu_adj))
                    num_k = kpoly_mul(num_k, adj_pow)
                    den_poly = den_poly * nu_norm ** p_pow
                for m in range(n):
                    if num_k[m].is_zero():
                        continue
                    tgt = m * r + comp_idx
                    comps[tgt] = comps[tgt] + RationalFn(num_k[m], den_poly)
        pieces.append(WitnessPiece(zeros, tuple(nonzero), tuple(comps)))
    # final piece: a = 0 forces the map (and the derivation) to zero
    pieces.append(WitnessPiece(frozenset(kvar_block(ctx, r, y_index)), (),
                               tuple(RationalFn.zero(QQ, N) for _ in range(N))))
    return PiecewiseWitness(QQ, N, tuple(groups), tuple(pieces))


def _monomial_in_coord(den: MultiPoly, nu: Optional[int]) -> Tuple[int, Scalar]:
    """den must be const * X_nu^p (p = 0 when den is constant)."""
    if den.is_constant():
        return 0, den.constant_value()
    if nu is None:
        raise ExactError("phi_D divides without a nonzero guard coordinate")
    if len(den.terms) != 1:
        raise ExactError("phi_D denominators must be monomials in the guard coordinate")
    expo, coeff = next(iter(den.terms.items()))
    for idx, k in enumerate(expo):
        if k and idx != nu:
            raise ExactError("phi_D denominator uses a non-guard coordinate")
    return expo[nu], coeff


def der_correspondence_rank(gK: LieAlgebra, ctx: ScalarChangeContext,
                            restricted: Optional[LieAlgebra] = None) -> Tuple[int, int]:
    """Q-rank of {s^m D : D in a K-basis of Der(g_K)} acting on the restricted
    algebra, paired with n * dim_K Der(g_K)."""
    n = ctx.degree
    r = gK.dim
    gq = restricted if restricted is not None else restrict_scalars(gK, ctx)
    ds = derivation_space(gK)
    flats = []
    for row in ds.der.rows:
        dmat = unflatten(ctx.ext, r, row)
        for m in range(n):
            scaled = dmat.scale(_spow(ctx.ext, m))
            flats.append(flatten(k_linear_matrix(gq, gK, ctx, scaled)))
    sub = Subspace(QQ, gq.dim * gq.dim, flats)
    return sub.dim, n * ds.der.dim


def _spow(K: FieldSpec, m: int) -> Scalar:
    out = K.one()
    for _ in range(m):
        out = K.mul(out, K.gen())
    return out


def k_linear_matrix(gq: LieAlgebra, gK: LieAlgebra, ctx: ScalarChangeContext,
                    dmat: Matrix) -> Matrix:
    """The Q-matrix of a K-linear map on the restricted basis {s^m e_i}."""
    K = ctx.ext
    n = ctx.degree
    r = gK.dim
    N = gq.dim
    out = [[QQ.zero()] * N for _ in range(N)]
    for m in range(n):
        sm = _spow(K, m)
        for c in range(r):
            col = dmat.column(c)
            for p in range(r):
                entry = K.mul(sm, col[p])
                if K.is_zero(entry):
                    continue
                for m2, qv in enumerate(K.coeffs(entry)):
                    if qv:
                        out[m2 * r + p][m * r + c] = qv
    return Matrix(QQ, out, cols=N)
