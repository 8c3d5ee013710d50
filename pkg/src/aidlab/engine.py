"""The AID sandwich: sampled upper bounds, witness lower bounds, refutations.

For fixed x the set L_x = {D in Der : D(x) in [g, x]} is a linear subspace
of the derivation space, so AID(g) = intersection of all L_x.  Sampling
finitely many x gives a sound upper bound; verified piecewise witnesses plus
Inn give the lower bound.  The two meet exactly on every algebra treated in
the reproduction suite; the report never claims exactness from sampling
alone.

The sample schedule is fixed: basis vectors, pairwise sums e_i + e_j,
pairwise differences e_i - e_j, then pseudorandom vectors with coordinate
bound doubling every 50 samples (over an extension field each coordinate
draws one integer per power of s).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from .fields import ExactError, FieldSpec, Scalar
from .linalg import Matrix, Subspace, kernel, rank, solve
from .liecore import Element, LieAlgebra
from .derive import (Derivation, DerSpace, derivation_space, flatten, unflatten)
from .parametric import ParametricVerdict, parametric_verdicts
from .prng import XorShift
from .witness import PiecewiseWitness, WitnessVerdict, verify_witness


class SoundnessError(RuntimeError):
    """A verified lower-bound member violated a sampled constraint, or the
    lower bound escaped the upper bound.  Either is a bug, never a result."""


@dataclass(frozen=True)
class SamplingConfig:
    seed: int = 0
    stall_limit: int = 25
    max_samples: int = 2000
    initial_bound: int = 2
    bound_doubling: int = 50


@dataclass
class PointConstraint:
    x: Element
    rows: Matrix  # ambient n^2, one row per left-kernel vector of ad_x


@dataclass
class WitnessEntry:
    derivation: Derivation
    witness: Optional[PiecewiseWitness]
    name: str
    provenance: str = "witness"


@dataclass
class AidReport:
    algebra: str
    dim: int
    dim_der: int
    dim_inn: int
    lower: Subspace
    upper: Subspace
    status: str  # "exact" | "bounded"
    caid_lower: Subspace
    caid_upper: Subspace
    generators: List[Tuple[Derivation, str]]
    refuted: List[Tuple[Derivation, Element]]
    rejected_witnesses: List[dict]
    samples_used: int
    seed: int

    def to_json(self) -> dict:
        f = self.lower.field
        return {
            "algebra": self.algebra,
            "dim": self.dim,
            "dim_der": self.dim_der,
            "dim_inn": self.dim_inn,
            "aid_lower": self.lower.dim,
            "aid_upper": self.upper.dim,
            "status": self.status,
            "caid_lower": self.caid_lower.dim,
            "caid_upper": self.caid_upper.dim,
            "generators": [
                {"provenance": prov, "matrix": d.matrix.to_json()}
                for d, prov in self.generators
            ],
            "refutations": [
                {"derivation": d.matrix.to_json(),
                 "point": [f.scalar_to_json(c) for c in x.coords]}
                for d, x in self.refuted
            ],
            "rejected_witnesses": self.rejected_witnesses,
            "samples_used": self.samples_used,
            "seed": self.seed,
        }

    def json_text(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)


def sample_schedule(g: LieAlgebra, cfg: SamplingConfig) -> Iterator[Element]:
    f = g.field
    n = g.dim
    for i in range(n):
        yield g.basis_element(i)
    for i in range(n):
        for j in range(i + 1, n):
            e = [f.zero()] * n
            e[i] = f.one()
            e[j] = f.one()
            yield g.element(e)
    for i in range(n):
        for j in range(i + 1, n):
            e = [f.zero()] * n
            e[i] = f.one()
            e[j] = f.neg(f.one())
            yield g.element(e)
    prng = XorShift(cfg.seed)
    bound = cfg.initial_bound
    produced = 0
    while True:
        coords = []
        for _ in range(n):
            parts = [Fraction(prng.randint(-bound, bound)) for _ in range(f.degree)]
            coords.append(f.from_coeffs(parts) if f.kind == "ext" else parts[0])
        if all(f.is_zero(c) for c in coords):
            continue
        yield g.element(coords)
        produced += 1
        if produced % cfg.bound_doubling == 0:
            bound *= 2


def point_constraint(g: LieAlgebra, x: Element) -> PointConstraint:
    """Rows u (x) x, u ranging over a left-kernel basis of ad_x; a derivation D
    satisfies them iff D(x) lies in [g, x]."""
    f = g.field
    n = g.dim
    adx = g.ad_matrix(x.coords)
    left = kernel(adx.transpose())
    rows = []
    for u in left:
        row = [f.zero()] * (n * n)
        for c in range(n):
            xc = x.coords[c]
            if f.is_zero(xc):
                continue
            for r in range(n):
                if not f.is_zero(u[r]):
                    row[c * n + r] = f.mul(u[r], xc)
        rows.append(row)
    return PointConstraint(x, Matrix(f, rows, cols=n * n))


def _apply_constraints(g: LieAlgebra, basis_flat: List[Tuple[Scalar, ...]],
                       x: Element) -> List[Tuple[Scalar, ...]]:
    """Intersect span(basis_flat) with L_x, in basis coordinates."""
    f = g.field
    n = g.dim
    adx = g.ad_matrix(x.coords)
    left = kernel(adx.transpose())
    if not left:
        return basis_flat
    images = []
    for flat in basis_flat:
        m = unflatten(f, n, flat)
        images.append(m.mul_vec(x.coords))
    crows = []
    for u in left:
        row = []
        for w in images:
            acc = f.zero()
            for ur, wr in zip(u, w):
                if not f.is_zero(ur) and not f.is_zero(wr):
                    acc = f.add(acc, f.mul(ur, wr))
            row.append(acc)
        if any(not f.is_zero(a) for a in row):
            crows.append(row)
    if not crows:
        return basis_flat
    combos = kernel(Matrix(f, crows, cols=len(basis_flat)))
    out = []
    for combo in combos:
        vec = [f.zero()] * (n * n)
        for k, ck in enumerate(combo):
            if f.is_zero(ck):
                continue
            row = basis_flat[k]
            for idx in range(n * n):
                if not f.is_zero(row[idx]):
                    vec[idx] = f.add(vec[idx], f.mul(ck, row[idx]))
        out.append(tuple(vec))
    return out


def aid_upper_bound(g: LieAlgebra, cfg: SamplingConfig = SamplingConfig(),
                    *, lower_stop: Optional[Subspace] = None,
                    sampled: Optional[List[Element]] = None
                    ) -> Tuple[Subspace, int]:
    """Sound over-approximation of AID(g): Der intersected with the sampled
    L_x constraints; stops on stall, sample budget, or when it reaches
    ``lower_stop`` (a known lower bound, making the result exact)."""
    ds = derivation_space(g)
    f = g.field
    n = g.dim
    current = Subspace(f, n * n, ds.der.rows)
    basis = list(current.rows)
    stall = 0
    used = 0
    for x in sample_schedule(g, cfg):
        if used >= cfg.max_samples or stall >= cfg.stall_limit:
            break
        if lower_stop is not None and current == lower_stop:
            break
        if not basis:
            break
        used += 1
        if sampled is not None:
            sampled.append(x)
        new_basis = _apply_constraints(g, basis, x)
        if len(new_basis) == len(basis):
            stall += 1
            continue
        stall = 0
        current = Subspace(f, n * n, new_basis)
        basis = list(current.rows)
    return current, used


def refute_aid(g: LieAlgebra, deriv: Derivation,
               cfg: SamplingConfig = SamplingConfig()) -> Optional[Element]:
    """First schedule point x with D(x) not in [g, x], re-verified by an exact
    rank comparison, or None within the sample budget."""
    f = g.field
    n = g.dim
    used = 0
    for x in sample_schedule(g, cfg):
        if used >= cfg.max_samples:
            break
        used += 1
        adx = g.ad_matrix(x.coords)
        b = deriv.matrix.mul_vec(x.coords)
        if solve(adx, b) is None:
            aug = Matrix(f, [list(r) + [bv] for r, bv in zip(adx.entries, b)], cols=n + 1)
            if rank(aug) != rank(adx) + 1:
                raise SoundnessError("solver and rank test disagree at a refutation point")
            return x
    return None


def aid_sandwich(g: LieAlgebra, witnesses: Sequence[WitnessEntry] = (),
                 cfg: SamplingConfig = SamplingConfig(), *,
                 parametric_fallback: bool = False,
                 parametric_depth: int = 12,
                 refutation_budget: int = 400) -> AidReport:
    """Exact lower bound (Inn + verified witnesses, optionally parametric
    certificates) against the sampled upper bound."""
    f = g.field
    n = g.dim
    ds = derivation_space(g)

    generators: List[Tuple[Derivation, str]] = []
    seen = Subspace.zero(f, n * n)
    for i in range(n):
        e = [f.zero()] * n
        e[i] = f.one()
        m = g.ad_matrix(e)
        flat = flatten(m)
        if not seen.contains(flat):
            generators.append((Derivation(g, m), "inner"))
            seen = seen.sum(Subspace(f, n * n, [flat]))

    rejected = []
    lower = Subspace(f, n * n, ds.inn.rows)
    verified_entries: List[WitnessEntry] = []
    for entry in witnesses:
        if entry.witness is None:
            rejected.append({"name": entry.name, "reason": "missing witness"})
            continue
        verdict = verify_witness(g, entry.derivation, entry.witness)
        if verdict.verified:
            verified_entries.append(entry)
            flat = entry.derivation.flat()
            if not lower.contains(flat):
                lower = lower.sum(Subspace(f, n * n, [flat]))
                generators.append((entry.derivation, "%s:%s" % (entry.provenance, entry.name)))
        else:
            rejected.append({"name": entry.name, "failures": verdict.failures})

    sampled: List[Element] = []
    upper, used = aid_upper_bound(g, cfg, lower_stop=lower, sampled=sampled)

    if not lower.is_subspace_of(upper):
        raise SoundnessError("lower bound escaped the sampled upper bound")
    for entry in verified_entries:
        for x in sampled:
            adx = g.ad_matrix(x.coords)
            if solve(adx, entry.derivation.matrix.mul_vec(x.coords)) is None:
                raise SoundnessError(
                    "witness-verified derivation %s violates the constraint at a sample"
                    % entry.name)

    refuted: List[Tuple[Derivation, Element]] = []
    if parametric_fallback and lower != upper:
        extension = []
        probe = lower
        for row in upper.rows:
            if not probe.contains(row):
                extension.append(row)
                probe = probe.sum(Subspace(f, n * n, [row]))
        derivs = [Derivation(g, unflatten(f, n, row)) for row in extension]
        if derivs:
            verdicts = parametric_verdicts(g, derivs, parametric_depth, cfg.seed)
            for deriv, verdict in zip(derivs, verdicts):
                if verdict.verdict == "almost_inner":
                    flat = deriv.flat()
                    if not lower.contains(flat):
                        lower = lower.sum(Subspace(f, n * n, [flat]))
                        generators.append((deriv, "parametric"))
                elif verdict.verdict == "not_almost_inner" and verdict.point is not None:
                    refuted.append((deriv, g.element(verdict.point)))
        if not lower.is_subspace_of(upper):
            raise SoundnessError("parametric fallback escaped the upper bound")

    # refutation certificates for derivation directions outside the upper bound
    if upper != ds.der:
        budget_cfg = SamplingConfig(cfg.seed, cfg.stall_limit,
                                    min(cfg.max_samples, refutation_budget),
                                    cfg.initial_bound, cfg.bound_doubling)
        probe = upper
        for row in ds.der.rows:
            if probe.contains(row):
                continue
            probe = probe.sum(Subspace(f, n * n, [row]))
            deriv = Derivation(g, unflatten(f, n, row))
            x = refute_aid(g, deriv, budget_cfg)
            if x is not None:
                refuted.append((deriv, x))

    status = "exact" if lower == upper else "bounded"
    caid_lower = ds.caid_condition.intersect(lower)
    caid_upper = ds.caid_condition.intersect(upper)
    return AidReport(
        algebra=g.name, dim=n, dim_der=ds.der.dim, dim_inn=ds.inn.dim,
        lower=lower, upper=upper, status=status,
        caid_lower=caid_lower, caid_upper=caid_upper,
        generators=generators, refuted=refuted,
        rejected_witnesses=rejected, samples_used=used, seed=cfg.seed)
