"""Steklov eigenvalue of the exterior disk by root-finding on the Robin family.

The lowest Steklov eigenvalue is the unique lambda with mu(b, nu, beta) = 0 at
beta = -lambda, where mu is the exterior Robin ground-state energy; mu is
strictly increasing in beta, so lambda is found by bracketing and Brent
iteration.  Each fiber's energy is monotone in beta as well, which lets the
solver iterate on the few candidate minimizing fibers and certify the result
with one full angular scan at the root.

Two verification campaigns are provided: the strong-field three-term check on
pinned-fractional-part field sequences, and the weak-field power-law fit of
lambda - |nu|.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from . import asym, degennes, fiber, specfun, sturm1d
from .errors import BracketError, ConsistencyError

__all__ = [
    "SteklovResult",
    "ReportTable",
    "steklov_lambda",
    "verify_steklov_thirdterm",
    "verify_weak_steklov",
    "weak_coefficient_target",
]

RESIDUAL_TOL = 1e-9
CSV_COLUMNS = ("b", "lambda", "residual2term", "residual3term", "scaled_residual")


@dataclass(frozen=True)
class SteklovResult:
    b: float
    nu: float
    lambda_val: float
    robin_residual: float
    bracket: tuple[float, float]
    iterations: int


@dataclass
class ReportTable:
    """Rows of a verification campaign plus its fitted summary numbers."""

    columns: tuple[str, ...]
    rows: list[tuple[float, ...]]
    summary: dict

    def write_csv(self, path) -> None:
        from .cli import format_float  # shared deterministic float formatting

        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(format_float(v) for v in row) + "\n")


def _mu_min(b: float, nu: float, beta: float, k: int = 0):
    gamma = beta / math.sqrt(b)
    spectrum = fiber.exterior_spectrum(b, nu, gamma, k)
    return spectrum[0][2], spectrum[0][0], spectrum


def _fiber_mu(m_scan: int, nu_n: float, b: float, beta: float) -> float:
    gamma = beta / math.sqrt(b)
    vals, _ = fiber._levels(m_scan, nu_n, b, gamma, 1)
    return vals[0]


@lru_cache(maxsize=8192)
def _fiber_mu_coarse(m_scan: int, nu_r: float, b_r: float, beta_r: float) -> float:
    """Quarter-resolution single-grid fiber energy for cheap root localization."""
    spec = fiber.FiberSpec(m_scan, nu_r, b_r, beta_r / math.sqrt(b_r))
    prob = fiber.fiber_problem(spec)
    n = max(prob.interval.n // 4, 64)
    vals, _, _, _ = sturm1d._eig_grid(prob, n, 1)
    return float(vals[0])


def _fiber_root(m_scan: int, nu_n: float, b: float, lo: float, hi: float) -> float | None:
    """Zero of one fiber's energy in beta, or None if it lies below the bracket.

    Localizes on the quarter-resolution grid, then polishes with a secant
    iteration on the extrapolated full-resolution energy.
    """
    coarse = lambda be: _fiber_mu_coarse(m_scan, round(nu_n, 12), round(b, 12), round(be, 12))
    f_lo = coarse(lo)
    if f_lo >= 0.0:
        return None  # energy already non-negative: the zero is below the bracket
    f_hi = coarse(hi)
    tries = 0
    while f_hi <= 0.0:
        hi += max(hi - lo, 0.05)
        f_hi = coarse(hi)
        tries += 1
        if tries > 60:
            raise BracketError(f"fiber m={m_scan} not bracketed from above at b={b}")
    root = float(brentq(coarse, lo, hi, xtol=1e-10))

    tol = 0.5 * RESIDUAL_TOL * max(1.0, b)
    step = max(1e-7 * max(1.0, abs(root)), 1e-9)
    f0 = _fiber_mu(m_scan, nu_n, b, root)
    for _ in range(6):
        if abs(f0) <= tol:
            break
        f1 = _fiber_mu(m_scan, nu_n, b, root + step)
        slope = (f1 - f0) / step
        if slope <= 0.0:  # pragma: no cover - energies are increasing in beta
            raise ConsistencyError("fiber energy not increasing in the Robin parameter")
        root -= f0 / slope
        f0 = _fiber_mu(m_scan, nu_n, b, root)
    return root


def steklov_lambda(b: float, nu: float) -> SteklovResult:
    """Lowest Steklov eigenvalue lambda(b, nu) with a certified Robin residual.

    The Robin ground-state energy is strictly increasing in beta and so is
    each fiber's energy, so the root of the minimum is the largest among the
    candidate fibers' roots.  Candidates start from the asymptotic guess and
    the loop is closed by a full certified angular scan at the root.
    """
    if b <= 0.0:
        raise ValueError("b must be positive")
    nu_n, shift = fiber.normalize_nu(nu)
    evals = 0

    a = degennes.hat_alpha()
    strong_guess = -(a * math.sqrt(b) + (a * a + 1.0) / 3.0)
    if b >= 1.0:
        guess = strong_guess
        width = 1.0
        _, xi_q = degennes.theta_quick(round(guess / math.sqrt(b), 12))
        m_center = round(nu_n + b / 2.0 + math.sqrt(b) * xi_q)
    else:
        log_branch = max(2.0 / math.log(b), -3.0) - 0.1  # nu = 0: logarithmic approach
        weak_guess = -abs(nu_n) - 0.02 if nu_n != 0.0 else log_branch
        guess = weak_guess
        width = max(0.6 * abs(weak_guess + abs(nu_n)), 0.1, abs(strong_guess - weak_guess))
        m_center = 0
    lo, hi = guess - width, guess + width

    candidates = {m_center - 1, m_center, m_center + 1}
    beta_star = residual = None
    for _round in range(8):
        roots = {}
        for m in sorted(candidates):
            r = _fiber_root(m - shift, nu_n, b, lo, hi)
            evals += 14
            if r is not None:
                roots[m] = r
        if not roots:
            # every candidate is non-negative on the whole bracket: move it down
            width *= 2.0
            hi = lo
            lo = lo - width
            evals += 1
            continue
        best = max(roots.values())
        residual, m_min, _ = _mu_min(b, nu_n, best)
        evals += 1
        if m_min in candidates and abs(residual) <= RESIDUAL_TOL * max(1.0, b):
            beta_star = best
            break
        candidates.update({m_min - 1, m_min, m_min + 1})
    if beta_star is None:
        raise ConsistencyError(f"Steklov certification failed at b={b}: residual {residual}")
    return SteklovResult(
        b=b,
        nu=nu,
        lambda_val=-beta_star,
        robin_residual=abs(residual),
        bracket=(lo, hi),
        iterations=evals,
    )


def verify_steklov_thirdterm(e0: float, nu: float, n_list) -> ReportTable:
    """Three-term Steklov check along a pinned-fractional-part field sequence.

    Sequences are built at gamma = -hat_alpha with the Robin-drift center
    shift; the b^-1/2 coefficient includes the drift feedback constant.  The
    table reports, per field strength: lambda, the residual against the
    two-term form, the residual against the three-term form, and the latter
    scaled by b.
    """
    a = degennes.hat_alpha()
    K = degennes.constants(-a)
    shift = asym.steklov_center_shift()
    feedback = asym.steklov_feedback_constant()
    seq = asym.build_e0_sequence(e0, nu, K, n_list, center_shift=shift)
    coeff3 = a * (e0 * e0 + K.c1) + feedback

    rows = []
    for _, _, b in seq.entries:
        lam = steklov_lambda(b, nu).lambda_val
        r2 = lam - (a * math.sqrt(b) + (a * a + 1.0) / 3.0)
        r3 = r2 - coeff3 / math.sqrt(b)
        rows.append((b, lam, r2, r3, b * r3))

    bs = np.array([r[0] for r in rows])
    r2s = np.array([r[2] for r in rows])
    slope2 = float(np.polyfit(np.log(bs), np.log(np.abs(r2s)), 1)[0])
    scaled3 = np.abs(np.array([r[4] for r in rows]))
    half = len(rows) // 2
    summary = {
        "e0": e0,
        "nu": nu,
        "coeff3": coeff3,
        "two_term_loglog_slope": slope2,
        "scaled3_max": float(np.max(scaled3)),
        "scaled3_top_half_max": float(np.max(scaled3[half:])),
        "scaled3_bottom_half_max": float(np.max(scaled3[: half + 1])),
    }
    return ReportTable(CSV_COLUMNS, rows, summary)


def weak_coefficient_target(nu: float) -> float:
    """Calibrated leading coefficient of lambda - |nu| ~ C b^|nu| at weak field.

    The symmetric Gamma-combination acquires a factor 2^-|nu| (the natural
    variable is b/2), and an additional cos(pi |nu|) for negative flux offset;
    both factors are derived from the Tricomi-U zero-energy condition of the
    radial fiber and confirmed by the finite-difference route.
    """
    if nu == 0.0:
        raise ValueError("the weak-field power law needs nu != 0")
    an = abs(nu)
    base = (
        2.0
        * specfun.gamma_fn(1.0 - an)
        * specfun.gamma_fn(an + 0.5)
        / (math.sqrt(math.pi) * specfun.gamma_fn(an))
    )
    corr = base * 2.0**-an
    if nu < 0.0:
        corr *= math.cos(math.pi * an)
    return corr


def _weak_correction_q(nu: float) -> float:
    """Derived first-correction coefficient of the weak Steklov chain (in b/2 units).

    The radial zero-energy condition expands as
    C z^|nu| (1 + q z^|nu| + q^2 z^{2|nu|} + ...), z = b/2, with q the ratio
    of the two leading terms of the Tricomi-U function at the origin.
    """
    an = abs(nu)
    g = specfun.gamma_fn
    if nu > 0.0:
        return -g(-an) * g(an + 0.5) / (g(0.5) * g(an))
    return -g(-an) * g(0.5) / (g(an) * g(0.5 - an))


def _weak_correction_second(nu: float) -> tuple[float, float]:
    """(coefficient, exponent) of the next derived correction, in b/2 units.

    For positive flux offset the second Tricomi-U function contributes a
    relative z^{1-|nu|} term; for negative offset the Kummer series of both
    functions contribute at relative order z.
    """
    an = abs(nu)
    g = specfun.gamma_fn
    if nu > 0.0:
        return g(an - 1.0) * g(1.5) / (g(an + 0.5) * g(1.0 - an)), 1.0 - an
    return -(0.5 - an) / (an * (1.0 - an)), 1.0


def verify_weak_steklov(nu: float, b_grid) -> ReportTable:
    """Weak-field power-law fit of the Steklov eigenvalue above |nu|.

    The measured lambda - |nu| - b/2 is first deflated by the derived
    geometric correction factor 1/(1 - q (b/2)^|nu|) (see
    :func:`_weak_correction_q`), then fitted against the pure power law
    C b^p.  residual2term is lambda - |nu| - b/2, residual3term is the
    deflated data minus the fitted power law, and scaled_residual divides
    that by b^{2|nu|}.
    """
    if nu == 0.0:
        raise ValueError("verify_weak_steklov needs nu != 0")
    bs = np.asarray(sorted(b_grid), dtype=float)
    if bs[0] <= 0.0 or bs[-1] > 0.1:
        raise ValueError("b_grid must lie in (0, 0.1]")
    an = abs(nu)
    lams = np.array([steklov_lambda(float(b), nu).lambda_val for b in bs])
    y = lams - an - bs / 2.0

    target = weak_coefficient_target(nu)
    q = _weak_correction_q(nu)
    u, e_u = _weak_correction_second(nu)
    zs = bs / 2.0
    deflated = y * (1.0 - q * zs**an) / (1.0 + u * zs**e_u)
    slope, intercept = np.polyfit(np.log(bs), np.log(deflated), 1)
    p_fit, c_fit = float(slope), float(math.exp(intercept))

    rows = []
    for b, lam, yy, yd in zip(bs, lams, y, deflated):
        r3 = yd - c_fit * b**p_fit
        rows.append((float(b), float(lam), float(yy), float(r3), float(r3 / b ** (2 * an))))
    summary = {
        "nu": nu,
        "exponent": p_fit,
        "coefficient": c_fit,
        "correction_q": q,
        "coefficient_target": target,
        "gamma_expression": target / (2.0**-an * (math.cos(math.pi * an) if nu < 0 else 1.0)),
    }
    return ReportTable(CSV_COLUMNS, rows, summary)
