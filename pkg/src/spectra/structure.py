"""Phase shifts, triple-sum bounds, and the spectral-overlap dichotomy.

The central result implemented here: for a density f with 0 < E(f) < 1/4 whose
rank-B*ell coefficient is small against theta*gamma^2*F (gamma the rank-ell
relative magnitude), either Lambda(f) > theta*gamma^2/4, or some nonzero shift
t makes the large spectrum R2 overlap its translate in at least (ell/B)^{1/2}
points.  prop1_dichotomy decides which branch holds and certifies it; a
TheoremViolation outcome is a diagnostic that must never occur on instances
passing the preconditions.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .field import (
    FieldParams,
    FieldPoint,
    all_digits,
    index_to_point,
    indices_of_digits,
    inv2_scalar,
    neg_perm,
    double_perm,
    shifted_indices,
)
from .ordering import LargeSpectrumSet, large_spectrum, spectral_order
from .progressions import lambda_brute
from .transform import ComplexFunction, DensityFunction, Spectrum, dft, _roots


@dataclass(frozen=True)
class DichotomyOutcome:
    """Tagged result of prop1_dichotomy.

    tag is one of LambdaLarge, OverlapFound, HypothesisFail, TheoremViolation.
    payload fields are populated per tag: lam for LambdaLarge (and whenever
    Lambda was computed), (t, overlap) for OverlapFound, reason otherwise.
    """

    tag: str
    gamma: float
    lam: float | None = None
    t: int | None = None
    overlap: int | None = None
    reason: str | None = None

    def to_json_dict(self) -> dict:
        return {
            "tag": self.tag,
            "gamma": self.gamma,
            "lambda": self.lam,
            "t": self.t,
            "overlap": self.overlap,
            "reason": self.reason,
        }


def phase_shift(f: DensityFunction, b: FieldPoint) -> ComplexFunction:
    """f(m) e^{2 pi i (b.m)/p}; translates the spectrum: result-hat(a) = f-hat(a+b)."""
    params = f.params
    if b.params != params:
        raise InputError("mismatched field parameters")
    D = all_digits(params).astype(np.int64)
    phases = _roots(params.p)[(D @ np.asarray(b.digits, dtype=np.int64)) % params.p]
    return ComplexFunction(params, f.values * phases)


def shifted_triple_sum(s: Spectrum, b1: FieldPoint, b2: FieldPoint) -> complex:
    """F^{-3} sum_a f-hat(a+b1) f-hat(a+b2) f-hat(-2a).

    For f >= 0 its modulus never exceeds Lambda(f); with b1 = b2 = 0 it is
    exactly the spectral Lambda.
    """
    params = s.params
    if b1.params != params or b2.params != params:
        raise InputError("mismatched field parameters")
    F = params.F
    c = s.coeffs
    t1 = shifted_indices(params, b1)
    t2 = shifted_indices(params, b2)
    neg2 = neg_perm(params)[double_perm(params)]
    return complex(np.sum(c[t1] * c[t2] * c[neg2]) / F**3)


def triple_cover_witness(
    R1: LargeSpectrumSet,
    R2: LargeSpectrumSet,
    b1: FieldPoint,
    b2: FieldPoint,
) -> FieldPoint | None:
    """Smallest-index a != 0 with -2a, a+b1, a+b2 all in R2; None if only a = 0 works.

    Candidates are exactly a = -x/2 for x in R2 (so -2a is in R2 by
    construction), scanned in canonical index order.
    """
    params = R1.params
    if b1.params != params or b2.params != params:
        raise InputError("mismatched field parameters")
    if b1.index not in R1 or b2.index not in R1:
        raise InputError("b1, b2 must lie in R1")
    if not R1.members <= R2.members:
        raise InputError("R1 must be contained in R2")
    p = params.p
    inv2 = inv2_scalar(params)
    D = all_digits(params).astype(np.int64)
    x_idx = np.fromiter(R2.members, dtype=np.int64, count=len(R2.members))
    cand = indices_of_digits((-D[x_idx] * inv2) % p, params)
    cand = np.sort(cand[cand > 0])
    d1 = np.asarray(b1.digits, dtype=np.int64)
    d2 = np.asarray(b2.digits, dtype=np.int64)
    for a in cand:
        if int(indices_of_digits((D[a] + d1) % p, params)) not in R2.members:
            continue
        if int(indices_of_digits((D[a] + d2) % p, params)) in R2.members:
            return index_to_point(int(a), params)
    return None


def best_overlap_shift(
    R2: LargeSpectrumSet,
    candidates: list[FieldPoint] | None = None,
) -> tuple[FieldPoint, int]:
    """Maximise |R2 intersect (R2 + t)| over t != 0; ties to the smallest index.

    When a candidate list is given only those shifts are scored (the
    pigeonhole a's in the dichotomy proof).
    """
    params = R2.params
    if len(R2.members) < 2:
        raise InputError("overlap search needs |R2| >= 2")
    if candidates is None:
        t_indices = np.arange(1, params.F, dtype=np.int64)
    else:
        seen = sorted({c.index if isinstance(c, FieldPoint) else int(c) for c in candidates})
        t_indices = np.array([t for t in seen if t != 0], dtype=np.int64)
        if t_indices.size == 0:
            raise InputError("no nonzero candidate shifts")
    inR = np.zeros(params.F, dtype=bool)
    members = np.fromiter(R2.members, dtype=np.int64, count=len(R2.members))
    inR[members] = True
    D = all_digits(params).astype(np.int64)
    best_t, best_overlap = None, -1
    for t in t_indices:
        shifted = indices_of_digits((D[members] - D[t]) % params.p, params)
        overlap = int(inR[shifted].sum())
        if overlap > best_overlap:
            best_t, best_overlap = int(t), overlap
    return index_to_point(best_t, params), best_overlap


def prop1_dichotomy(f: DensityFunction, ell: int, B: int) -> DichotomyOutcome:
    """Decide the large-Lambda / large-overlap dichotomy for (f, ell, B)."""
    params = f.params
    F = params.F
    if not (isinstance(B, int) and B > 1):
        raise InputError("B must be an integer > 1")
    if ell < 1 or ell * B > F:
        raise InputError(f"need 1 <= ell <= F/B, got ell = {ell}")
    theta = f.expectation()
    if not 0.0 < theta < 0.25:
        raise InputError(f"need 0 < E(f) < 1/4, got {theta}")

    order = spectral_order(dft(f))
    gamma = order.mag_at(ell) / F

    # Hypothesis gate |f-hat(a_{B ell})| < theta gamma^2 F, in the log domain.
    m_bl = order.mag_at(B * ell)
    log_lhs = math.log(m_bl) if m_bl > 0.0 else -math.inf
    log_rhs = (math.log(theta) + 2.0 * math.log(gamma) + math.log(F)
               if gamma > 0.0 else -math.inf)
    if not log_lhs < log_rhs:
        return DichotomyOutcome("HypothesisFail", gamma,
                                reason="rank-B*ell coefficient is not small")

    lam = lambda_brute(f)
    if lam > theta * gamma * gamma / 4.0:
        return DichotomyOutcome("LambdaLarge", gamma, lam=lam)

    R1 = large_spectrum(order, ell)
    R2 = large_spectrum(order, B * ell)
    counts: dict[int, int] = {}
    for i1 in R1.ordered:
        b1 = index_to_point(i1, params)
        for i2 in R1.ordered:
            b2 = index_to_point(i2, params)
            a = triple_cover_witness(R1, R2, b1, b2)
            if a is None:
                # The claim bound forces Lambda > theta gamma^2/4 here, which
                # contradicts the branch we are in.
                return DichotomyOutcome(
                    "TheoremViolation", gamma, lam=lam,
                    reason=f"pair ({i1},{i2}) has no nonzero covering a yet Lambda is small")
            counts[a.index] = counts.get(a.index, 0) + 1
    t, overlap = best_overlap_shift(R2, [index_to_point(a, params) for a in counts])
    needed = math.sqrt(ell / B)
    if overlap + 1e-12 < needed:
        return DichotomyOutcome(
            "TheoremViolation", gamma, lam=lam, t=t.index, overlap=overlap,
            reason=f"best overlap {overlap} below (ell/B)^(1/2) = {needed:.6g}")
    return DichotomyOutcome("OverlapFound", gamma, lam=lam, t=t.index, overlap=overlap)
