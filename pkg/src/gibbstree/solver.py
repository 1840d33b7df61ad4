"""Bracketing root solvers for the scalar block and mirror systems.

Both solvers follow the same recipe: scan a covering interval on a dense
grid for strict sign changes, refine each bracket by guarded bisection, seed
the always-present unit solution explicitly (it can land exactly on a grid
node, where a strict sign test goes blind), merge near-duplicates, and embed
every surviving root back into the full field system.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath as mp
import numpy as np

from .errors import ConvergenceError, EvaluationError, ParameterError
from .invariants import (
    InvariantSetId,
    ReducedScalar,
    SetKind,
    embed_full,
    im_prime_poly,
    im_prime_poly_mp,
    im_prime_system_residual,
    mobius_deriv,
    mobius_map,
    mobius_pow_k,
    recover_t_from_z,
    two_step_map,
)
from .model import ModelParams


@dataclass(frozen=True)
class Bracket:
    """An interval with a strict sign change of the scanned function."""

    lo: float
    hi: float
    f_lo: float
    f_hi: float

    def __post_init__(self) -> None:
        if not self.lo < self.hi:
            raise ParameterError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if not self.f_lo * self.f_hi < 0.0:
            raise ParameterError("bracket endpoints must have strictly opposite signs")


@dataclass(frozen=True)
class SolverConfig:
    grid_points: int = 10_000
    refine_tol: float = 1e-12
    dedup_tol: float = 1e-8
    max_refine_iters: int = 200

    def __post_init__(self) -> None:
        if not isinstance(self.grid_points, int) or self.grid_points < 100:
            raise ParameterError(f"grid_points must be an integer >= 100, got {self.grid_points!r}")
        for name in ("refine_tol", "dedup_tol"):
            v = getattr(self, name)
            if not 0.0 < v < 1e-2:
                raise ParameterError(f"{name} must lie in (0, 1e-2), got {v!r}")
        if not isinstance(self.max_refine_iters, int) or self.max_refine_iters < 1:
            raise ParameterError(f"max_refine_iters must be a positive integer")


def scan_sign_changes(fn, lo: float, hi: float, config: SolverConfig | None = None,
                      spacing: str = "uniform") -> list[Bracket]:
    """Evaluate fn on a grid over [lo, hi] and collect strict sign-change cells.

    spacing "geometric" places nodes uniformly in ln(x) (lo must be positive);
    "uniform" places them uniformly in x.  A node where fn is exactly zero
    produces no bracket, so known roots must be seeded by the caller.
    """
    config = config or SolverConfig()
    if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
        raise ParameterError(f"need finite lo < hi, got [{lo}, {hi}]")
    if spacing == "geometric":
        if lo <= 0.0:
            raise ParameterError("geometric spacing needs lo > 0")
        xs = np.geomspace(lo, hi, config.grid_points)
    elif spacing == "uniform":
        xs = np.linspace(lo, hi, config.grid_points)
    else:
        raise ParameterError(f"spacing must be 'uniform' or 'geometric', got {spacing!r}")
    xs = xs.tolist()
    vals = []
    for x in xs:
        v = fn(x)
        if not math.isfinite(v):
            raise EvaluationError(f"function value {v!r} at grid node x={x!r}")
        vals.append(v)
    out = []
    for i in range(len(xs) - 1):
        if vals[i] * vals[i + 1] < 0.0:
            out.append(Bracket(xs[i], xs[i + 1], vals[i], vals[i + 1]))
    return out


def refine(fn, bracket: Bracket, config: SolverConfig | None = None) -> float:
    """Shrink a bracket to width 2*refine_tol and return its midpoint.

    Bisection with an interleaved secant step when the secant candidate falls
    strictly inside the current interval; the alternation keeps the worst case
    at twice the bisection count.
    """
    config = config or SolverConfig()
    lo, hi, f_lo, f_hi = bracket.lo, bracket.hi, bracket.f_lo, bracket.f_hi
    use_secant = False
    for _ in range(config.max_refine_iters):
        if hi - lo <= 2.0 * config.refine_tol:
            return 0.5 * (lo + hi)
        mid = 0.5 * (lo + hi)
        if use_secant and math.isfinite(f_lo) and math.isfinite(f_hi) and f_hi != f_lo:
            cand = lo - f_lo * (hi - lo) / (f_hi - f_lo)
            if lo + config.refine_tol < cand < hi - config.refine_tol:
                mid = cand
        use_secant = not use_secant
        f_mid = fn(mid)
        if f_mid == 0.0:
            return mid
        if f_lo * f_mid < 0.0:
            hi, f_hi = mid, f_mid
        else:
            lo, f_lo = mid, f_mid
    raise ConvergenceError(
        f"bracket [{lo}, {hi}] not reduced to 2*{config.refine_tol} "
        f"within {config.max_refine_iters} iterations"
    )


def dedup_roots(roots: list[float], fn, tol: float) -> list[float]:
    """Merge roots closer than tol*max(1, |x|), keeping the smallest |fn| in each cluster."""
    out: list[float] = []
    for r in sorted(roots):
        if out and r - out[-1] <= tol * max(1.0, abs(r)):
            if abs(fn(r)) < abs(fn(out[-1])):
                out[-1] = r
        else:
            out.append(r)
    return out


def scan_interval_for_im(params: ModelParams, m: int) -> tuple[float, float]:
    """Interval guaranteed to contain every two-step fixed point for the block set.

    Fixed points lie in the image of the k-th power of the fractional-linear
    map, which is (((theta+m-1)/m)^k, ((q-m)/(theta+q-m-1))^k); each end is
    widened by one percent.
    """
    theta, q, k = params.theta, params.q, params.k
    f_inf = (theta + m - 1.0) / m
    f_zero = (q - m) / (theta + q - m - 1.0)
    if f_inf <= 0.0:
        # unreachable for m >= 1 since theta > 0; kept as a defensive floor
        return (theta ** k * 1e-2, f_zero ** k * 1e2)
    return (f_inf ** k * 0.99, f_zero ** k * 1.01)


def solve_im(params: ModelParams, m: int,
             config: SolverConfig | None = None) -> list[ReducedScalar]:
    """All block-pattern solutions (x, y) at the given parameters, ascending in x.

    x ranges over fixed points of the two-step map, y = f(x)^k is the partner
    value, and x = y = 1 is always present.  Below theta_critical at least
    three solutions appear; above it only the unit one.
    """
    params.require_solver_regime()
    set_id = InvariantSetId(SetKind.IM, m)
    set_id.validate_for(params.q)
    config = config or SolverConfig()

    def gap(x: float) -> float:
        return two_step_map(x, params, m) - x

    def gap_deriv(x: float) -> float:
        y = mobius_pow_k(x, params, m)
        k = params.k
        inner = k * mobius_map(x, params, m) ** (k - 1) * mobius_deriv(x, params, m)
        outer = k * mobius_map(y, params, m) ** (k - 1) * mobius_deriv(y, params, m)
        return outer * inner - 1.0

    def polish(x: float) -> float:
        # the bisection tolerance is absolute, but embedding works in log
        # space where an error delta maps to delta/x; a few Newton steps
        # recover full precision for roots far below 1
        for _ in range(3):
            g = gap(x)
            if g == 0.0:
                break
            d = gap_deriv(x)
            if not math.isfinite(d) or d == 0.0:
                break
            cand = x - g / d
            if cand <= 0.0 or not math.isfinite(cand) or abs(gap(cand)) > abs(g):
                break
            x = cand
        return x

    lo, hi = scan_interval_for_im(params, m)
    brackets = scan_sign_changes(gap, lo, hi, config, spacing="geometric")
    roots = [polish(refine(gap, b, config)) for b in brackets]
    roots.append(1.0)  # exact unit fixed point, invisible to strict sign scans
    roots = dedup_roots(roots, gap, config.dedup_tol)

    solutions = []
    for x in sorted(roots):
        y = mobius_pow_k(x, params, m)
        sol = ReducedScalar(x=x, y=y, set_id=set_id)
        embed_full(sol, params)
        solutions.append(sol)
    return solutions


@dataclass(frozen=True)
class RejectedRoot:
    """A polynomial root that does not lift to a positive mirror solution."""

    z: float
    reason: str


def _mirror_scan_limit(params: ModelParams, m: int, config: SolverConfig) -> float:
    """Upper scan bound: doubled until the polynomial stays negative across a doubling."""
    z = max(2.0, 2.0 * (params.theta + m - 1.0) / m)
    for _ in range(60):
        samples = np.linspace(z, 2.0 * z, 33)[1:]
        if all(im_prime_poly(float(s), params, m) < 0.0 for s in samples):
            return 2.0 * z
        z *= 2.0
    raise ConvergenceError("mirror polynomial did not turn negative within 60 doublings")


def solve_im_prime(params: ModelParams, m: int,
                   config: SolverConfig | None = None,
                   ) -> tuple[list[ReducedScalar], list[RejectedRoot]]:
    """All mirror-pattern solutions, ascending in x, plus rejected polynomial roots.

    Every accepted root z recovers a positive partner t and satisfies the
    coupled fixed-point system to 1e-9; roots whose partner is complex or
    nonpositive are reported in the second list with a reason.
    """
    params.require_solver_regime()
    set_id = InvariantSetId(SetKind.IM_PRIME, m)
    set_id.validate_for(params.q)
    config = config or SolverConfig()

    def poly(z: float) -> float:
        return im_prime_poly(z, params, m)

    def polish(z: float) -> float:
        # same log-space consideration as the block solver; the derivative
        # comes from a high-precision central difference so cancellation in
        # the polynomial cannot poison the step
        with mp.workdps(40):
            zz = mp.mpf(z)
            h = mp.mpf("1e-12") * max(1.0, abs(z))
            for _ in range(3):
                pv = im_prime_poly_mp(zz, params, m)
                if pv == 0:
                    break
                dv = (im_prime_poly_mp(zz + h, params, m)
                      - im_prime_poly_mp(zz - h, params, m)) / (2 * h)
                if dv == 0:
                    break
                cand = zz - pv / dv
                if cand <= 0 or not mp.isfinite(cand):
                    break
                zz = cand
            return float(zz)

    hi = _mirror_scan_limit(params, m, config)
    brackets = scan_sign_changes(poly, 0.0, hi, config, spacing="uniform")
    roots = [polish(refine(poly, b, config)) for b in brackets]
    roots.append(1.0)  # p(1) = 0 exactly
    roots = dedup_roots(roots, poly, config.dedup_tol)

    solutions = []
    rejected = []
    for z in sorted(roots):
        t = recover_t_from_z(z, params, m)
        if t is None:
            rejected.append(RejectedRoot(z=z, reason="partner value t^k not positive"))
            continue
        res = im_prime_system_residual(z, t, params, m)
        if not res <= 1e-9:
            rejected.append(RejectedRoot(z=z, reason=f"system residual {res:.3e} > 1e-9"))
            continue
        sol = ReducedScalar(x=z ** params.k, y=t ** params.k, set_id=set_id, z=z, t=t)
        embed_full(sol, params)
        solutions.append(sol)
    solutions.sort(key=lambda s: s.x)
    return solutions, rejected
