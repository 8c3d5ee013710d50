"""Exact decision of almost-innerness by parametric Gaussian elimination.

For symbolic x the system [ad_x | D x] is eliminated over the polynomial
ring with explicit case splits on pivot (non)vanishing.  A stratum records
coordinates assumed zero (substituted immediately), variables assumed
nonzero, and polynomial assumptions.  At each leaf the unpivoted rows have
identically-zero ad-part, so a derivation is solvable on the stratum iff
its residual entries vanish there.

Verdicts are asymmetric by design: "almost inner" needs every leaf residual
to be the zero polynomial, while "not almost inner" is only reported with a
concrete rational point certified by an exact rank comparison, so the
elimination tree is never trusted for refutations.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import gcd
from typing import Dict, List, Optional, Sequence, Tuple

from .fields import FieldSpec, Scalar
from .linalg import Matrix, rank
from .liecore import Element, LieAlgebra
from .multipoly import MultiPoly
from .prng import XorShift

LEAF_CAP = 20000


@dataclass
class _State:
    zeros: frozenset
    nz_vars: frozenset
    nz_polys: Tuple[MultiPoly, ...]
    zero_polys: Tuple[MultiPoly, ...]
    depth: int


@dataclass
class ParametricVerdict:
    verdict: Optional[str]  # "almost_inner" | "not_almost_inner" | None
    point: Optional[Tuple[Scalar, ...]] = None
    stratum: Optional[dict] = None

    def __bool__(self):
        return self.verdict == "almost_inner"


def aid_exact_parametric(g: LieAlgebra, deriv, depth_limit: int = 12,
                         seed: int = 0) -> ParametricVerdict:
    return parametric_verdicts(g, [deriv], depth_limit, seed)[0]


def parametric_verdicts(g: LieAlgebra, derivs: Sequence, depth_limit: int = 12,
                        seed: int = 0) -> List[ParametricVerdict]:
    """Shared-tree decision for several derivations of one algebra."""
    f = g.field
    n = g.dim
    nd = len(derivs)
    mats = [d.matrix if hasattr(d, "matrix") else d for d in derivs]

    def var(i):
        return MultiPoly.var(f, n, i)

    zero_poly = MultiPoly.zero(f, n)
    rows: List[List[MultiPoly]] = []
    for r in range(n):
        row = []
        for c in range(n):
            acc = zero_poly
            for i in range(n):
                if i == c:
                    continue
                coeff = g.bracket_basis(i, c).get(r)
                if coeff is not None:
                    acc = acc + var(i).scale(coeff)
            row.append(acc)
        for d in range(nd):
            acc = zero_poly
            m = mats[d]
            for i in range(n):
                coeff = m.entries[r][i]
                if not f.is_zero(coeff):
                    acc = acc + var(i).scale(coeff)
            row.append(acc)
        rows.append(row)

    solvable = [True] * nd
    refuted: List[Optional[Tuple[Scalar, ...]]] = [None] * nd
    inconclusive = [False] * nd
    leaves = [0]
    prng = XorShift(seed ^ 0x9E3779B9)

    def norm_row(row: List[MultiPoly]) -> List[MultiPoly]:
        if f.kind != "Q":
            return row
        num_g, den_l = 0, 1
        for p in row:
            for c in p.terms.values():
                num_g = gcd(num_g, abs(c.numerator))
                den_l = den_l * c.denominator // gcd(den_l, c.denominator)
        if num_g in (0, 1) and den_l == 1:
            return row
        scale = Fraction(den_l, num_g or 1)
        return [MultiPoly(f, n, {e: c * scale for e, c in p.terms.items()}) for p in row]

    def try_div(row: List[MultiPoly], divisor: MultiPoly) -> Optional[List[MultiPoly]]:
        out = []
        for p in row:
            if p.is_zero():
                out.append(p)
                continue
            q = p.divide_exact(divisor)
            if q is None:
                return None
            out.append(q)
        return out

    def search_point(state: _State, residual_idx: List[int],
                     residuals: List[List[MultiPoly]]):
        """Deterministic seeded hunt for a stratum point where some residual
        is nonzero; returns (deriv_index, point) or None."""
        if any(not p.is_zero() for p in state.zero_polys):
            return None
        for trial in range(240):
            bound = 3 + trial // 30
            coords: List[Scalar] = []
            for i in range(n):
                if i in state.zeros:
                    coords.append(f.zero())
                    continue
                parts = [prng.randint(-bound, bound) for _ in range(f.degree)]
                if i in state.nz_vars and all(p == 0 for p in parts):
                    parts[0] = 1
                coords.append(f.from_coeffs([Fraction(p) for p in parts])
                              if f.kind == "ext" else Fraction(parts[0]))
            if any(f.is_zero(coords[i]) for i in state.nz_vars):
                continue
            if any(f.is_zero(p.eval(coords)) for p in state.nz_polys):
                continue
            for dpos, d in enumerate(residual_idx):
                if refuted[d] is not None:
                    continue
                if any(not f.is_zero(p.eval(coords)) for p in residuals[dpos]):
                    adx = g.ad_matrix(coords)
                    b = mats[d].mul_vec(coords)
                    aug = Matrix(f, [list(r) + [bv] for r, bv in zip(adx.entries, b)],
                                 cols=n + 1)
                    if rank(aug) == rank(adx) + 1:
                        stratum = {
                            "zeros": sorted(v + 1 for v in state.zeros),
                            "nonzero_vars": sorted(v + 1 for v in state.nz_vars),
                            "assumed_nonzero": [p.to_string() for p in state.nz_polys],
                        }
                        return d, tuple(coords), stratum
        return None

    def descend(work: List[List[MultiPoly]], live: List[int], state: _State):
        if leaves[0] > LEAF_CAP:
            for d in range(nd):
                inconclusive[d] = True
            return
        # global pivot choice: fewest terms, then smallest leading variable,
        # then column, then row
        while True:
            best = None
            for ri in live:
                row = work[ri]
                for c in range(n):
                    p = row[c]
                    if p.is_zero():
                        continue
                    lead_var = min(p.variables(), default=n)
                    key = (len(p.terms), lead_var, c, ri)
                    if best is None or key < best[0]:
                        best = (key, ri, c, p)
            if best is None:
                break
            _, prow_idx, pcol, pivot = best
            if pivot.is_constant():
                _eliminate(work, live, prow_idx, pcol, state)
                live = [r for r in live if r != prow_idx]
                continue
            if len(pivot.terms) == 1:
                expo = next(iter(pivot.terms))
                vars_in = [i for i, k in enumerate(expo) if k]
                unknown = [v for v in vars_in if v not in state.nz_vars]
                if not unknown:
                    _eliminate(work, live, prow_idx, pcol, state)
                    live = [r for r in live if r != prow_idx]
                    continue
                if state.depth >= depth_limit:
                    for d in range(nd):
                        inconclusive[d] = True
                    return
                # zero branches, one per undetermined variable of the monomial
                for v in unknown:
                    sub_work = [[p.substitute_zero([v]) for p in row] for row in work]
                    nzp = tuple(q.substitute_zero([v]) for q in state.nz_polys)
                    if any(q.is_zero() for q in nzp):
                        continue  # empty stratum
                    zp = tuple(q.substitute_zero([v]) for q in state.zero_polys)
                    if any(q.is_constant() and not q.is_zero() for q in zp):
                        continue
                    descend(sub_work, list(live), _State(
                        state.zeros | {v}, state.nz_vars, nzp, zp, state.depth + 1))
                nz_state = _State(state.zeros, state.nz_vars | set(unknown),
                                  state.nz_polys, state.zero_polys, state.depth + 1)
                work = [list(row) for row in work]
                _eliminate(work, live, prow_idx, pcol, nz_state)
                live = [r for r in live if r != prow_idx]
                state = nz_state
                continue
            # multi-term pivot
            if state.depth >= depth_limit:
                for d in range(nd):
                    inconclusive[d] = True
                return
            zero_work = [list(row) for row in work]
            zero_work[prow_idx] = list(zero_work[prow_idx])
            zero_work[prow_idx][pcol] = zero_poly
            descend(zero_work, list(live), _State(
                state.zeros, state.nz_vars, state.nz_polys,
                state.zero_polys + (pivot,), state.depth + 1))
            state = _State(state.zeros, state.nz_vars,
                           state.nz_polys + (pivot,), state.zero_polys, state.depth + 1)
            work = [list(row) for row in work]
            _eliminate(work, live, prow_idx, pcol, state)
            live = [r for r in live if r != prow_idx]
        # leaf: unpivoted rows have zero ad-part on this stratum
        leaves[0] += 1
        residuals = []
        bad = []
        for d in range(nd):
            res = [work[ri][n + d] for ri in live if not work[ri][n + d].is_zero()]
            residuals.append(res)
            if res:
                bad.append(d)
                solvable[d] = False
        if bad:
            hit = search_point(state, list(range(nd)), residuals)
            while hit is not None:
                d, pt, stratum = hit
                refuted[d] = (pt, stratum)
                hit = search_point(state, list(range(nd)), residuals)
            for d in bad:
                if refuted[d] is None:
                    inconclusive[d] = True

    def _eliminate(work: List[List[MultiPoly]], live: List[int],
                   prow_idx: int, pcol: int, state: _State):
        pivot = work[prow_idx][pcol]
        prow = work[prow_idx]
        for ri in live:
            if ri == prow_idx:
                continue
            row = work[ri]
            entry = row[pcol]
            if entry.is_zero():
                continue
            new = [pivot * row[k] - entry * prow[k] for k in range(len(row))]
            divided = try_div(new, pivot)
            if divided is not None and not all(p.is_zero() for p in divided):
                new = divided
            work[ri] = norm_row(new)

    init = _State(frozenset(), frozenset(), (), (), 0)
    descend(rows, list(range(n)), init)

    out = []
    for d in range(nd):
        if refuted[d] is not None:
            pt, stratum = refuted[d]
            out.append(ParametricVerdict("not_almost_inner", pt, stratum))
        elif inconclusive[d]:
            out.append(ParametricVerdict(None))
        elif solvable[d]:
            out.append(ParametricVerdict("almost_inner"))
        else:
            out.append(ParametricVerdict(None))
    return out
