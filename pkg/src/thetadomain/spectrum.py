"""Double-zero spectrum of the partial theta function.

For a discrete set of bases 0 < qt_1 < qt_2 < ... < 1 the function
theta(q, .) acquires a double real zero y_N < 0 (the rightmost pair of
negative zeros collides and then splits into a complex conjugate pair).
Each spectral point solves the square system

    theta(q, y) = 0,    d theta / dz (q, y) = 0,

which this module solves by a damped two-dimensional Newton iteration with
exact term-wise derivatives.  A continuation strategy walks the index N
upward: the next base is predicted from the large-N expansion corrected by
the previous drift, and the zero seed comes from the rightmost negative
valley of theta at the predicted base (keeping each solve in the basin of
the intended spectral point).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpf

from .series import (
    DEFAULT_PRECISION,
    Precision,
    QParam,
    as_qparam,
    theta_dq,
    theta_dz,
    theta_dzq,
    theta_dzz,
    theta_eval,
)

__all__ = [
    "AsymptoticEstimate",
    "SpectrumEntry",
    "SpectrumError",
    "asymptotic_estimate",
    "double_zero_solve",
    "spectrum_table",
]


class SpectrumError(RuntimeError):
    pass


@dataclass(frozen=True)
class SpectrumEntry:
    """One spectral point: index, base, double zero, certified residuals."""

    n: int
    q_tilde: mpf
    y: mpf
    residual_theta: mpf
    residual_dz: mpf

    def __post_init__(self) -> None:
        if not self.y < 0:
            raise SpectrumError(f"double zero must be negative, got {self.y}")
        if not 0 < self.q_tilde < 1:
            raise SpectrumError(f"spectral base must lie in (0, 1), got {self.q_tilde}")


@dataclass(frozen=True)
class AsymptoticEstimate:
    """Leading-terms large-N estimate (order terms dropped):

    q_est = 1 - pi/(2N) + ln(N)/(8 N^2),   y_est = -e^pi e^{-ln(N)/(4N)}.
    """

    n: int
    q_est: mpf
    y_est: mpf


def asymptotic_estimate(n: int, precision: Precision = DEFAULT_PRECISION) -> AsymptoticEstimate:
    if n < 1:
        raise ValueError("n must be >= 1")
    with mp.workprec(max(precision.working_bits, 64)):
        nn = mpf(n)
        q_est = 1 - mp.pi / (2 * nn) + mp.log(nn) / (8 * nn * nn)
        y_est = -mp.exp(mp.pi) * mp.exp(-mp.log(nn) / (4 * nn))
        return AsymptoticEstimate(n=n, q_est=+q_est, y_est=+y_est)


def _solver_precision(q: float, base: Precision) -> Precision:
    # series decay slows as q -> 1: grow the floor by 8 bits per unit 1/(1-q)
    extra = int(8.0 / max(1e-6, 1.0 - q))
    return Precision(max(base.working_bits, 128 + extra))


def _eval_system(qv: mpf, y: mpf, eps, precision: Precision):
    th = theta_eval(qv, y, eps, precision)
    tz = theta_dz(qv, y, eps, precision)
    return th, tz


def double_zero_solve(
    q_seed,
    y_seed,
    tol: float = 1e-10,
    max_iter: int = 80,
    precision: Precision = DEFAULT_PRECISION,
    index: int = 1,
) -> SpectrumEntry:
    """Damped 2-D Newton on (theta, theta_dz) = (0, 0) from the given seeds.

    The Jacobian uses the exact term-wise q- and z-derivatives.  Steps are
    halved (up to 40 times) while the residual fails to decrease or an
    iterate leaves q in (0, 1), y < 0.  Residuals at the solution are
    certified below tol.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not (0 < q_seed < 1):
        raise SpectrumError(f"q_seed {q_seed} outside (0, 1)")
    if not y_seed < 0:
        raise SpectrumError(f"y_seed {y_seed} must be negative")
    prec = _solver_precision(float(q_seed), precision)
    bits = prec.working_bits
    eps = mpf(tol) / 64
    with mp.workprec(bits):
        q = mpf(q_seed)
        y = mpf(y_seed)

    def resid(qv, yv):
        th, tz = _eval_system(qv, yv, eps, prec)
        return max(abs(th.value) + th.err, abs(tz.value) + tz.err)

    res = resid(q, y)
    for _ in range(max_iter):
        if res <= tol:
            th, tz = _eval_system(q, y, eps, prec)
            return SpectrumEntry(
                n=index,
                q_tilde=q,
                y=y,
                residual_theta=abs(th.value) + th.err,
                residual_dz=abs(tz.value) + tz.err,
            )
        th = theta_eval(q, y, eps, prec)
        tz = theta_dz(q, y, eps, prec)
        tq = theta_dq(q, y, eps, prec)
        tzq = theta_dzq(q, y, eps, prec)
        tzz = theta_dzz(q, y, eps, prec)
        with mp.workprec(bits):
            det = tq.value * tzz.value - tz.value * tzq.value
            if det == 0:
                raise SpectrumError("singular Jacobian in the double-zero solve")
            dq = (-th.value * tzz.value + tz.value * tz.value) / det
            dy = (-tq.value * tz.value + tzq.value * th.value) / det
        lam = mpf(1)
        moved = False
        for _half in range(40):
            qn, yn = q + lam * dq, y + lam * dy
            if 0 < qn < 1 and yn < 0:
                rn = resid(qn, yn)
                if rn < res:
                    q, y, res = qn, yn, rn
                    moved = True
                    break
            lam /= 2
        if not moved:
            raise SpectrumError(
                f"diverged: residual stalled at {mp.nstr(res, 4)} near "
                f"q = {mp.nstr(q, 8)}, y = {mp.nstr(y, 8)}"
            )
    raise SpectrumError(f"diverged: residual {mp.nstr(res, 4)} after {max_iter} iterations")


def _rightmost_negative_valley(
    qv, lo: float, hi: float = -1.5, n: int = 260, precision: Precision = DEFAULT_PRECISION
) -> float | None:
    """Location of the rightmost strict local minimum of theta(q, .) with a
    negative value on [lo, hi]; widens the window leftward if none found."""
    prec = _solver_precision(float(qv), precision)
    eps = mpf("1e-20")
    for _ in range(6):
        xs = [lo + (hi - lo) * i / (n - 1) for i in range(n)]
        vals = [theta_eval(qv, x, eps, prec).value for x in xs]
        best = None
        for i in range(1, n - 1):
            if vals[i] < vals[i - 1] and vals[i] < vals[i + 1] and vals[i] < 0:
                best = xs[i]
        if best is not None:
            return best
        lo *= 1.8
    return None


def spectrum_table(
    n_max: int,
    tol: float = 1e-10,
    precision: Precision = DEFAULT_PRECISION,
    validate_counts: bool = False,
) -> list[SpectrumEntry]:
    """Spectral points 1..n_max by continuation.

    The first solve is seeded at (0.31, -7).  For each later N the base is
    predicted from the large-N estimate plus the previous drift scaled by
    ((N-1)/N)^2, deliberately undershot by 30%, and the zero seed is the
    rightmost negative valley at the predicted base (for a base below the
    target this valley belongs to exactly the pair about to collide).
    Strict monotonicity in q is enforced; failed solves retry from
    perturbed seeds before giving up.

    With ``validate_counts`` the pair-count transition across each solved
    base is verified by the argument principle (slower; delegated to the
    zero-finder).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    entries: list[SpectrumEntry] = []
    first = double_zero_solve(0.31, -7, tol=tol, precision=precision, index=1)
    entries.append(first)

    for n in range(2, n_max + 1):
        prev = entries[-1]
        drift = float(prev.q_tilde) - float(asymptotic_estimate(n - 1).q_est)
        q_pred = float(asymptotic_estimate(n).q_est) + drift * ((n - 1) / n) ** 2
        entry = None
        failures: list[str] = []
        for undershoot in (0.7, 0.5, 0.85):
            seed_q = float(prev.q_tilde) + undershoot * (q_pred - float(prev.q_tilde))
            if not float(prev.q_tilde) < seed_q < 1:
                failures.append(f"seed {seed_q} out of range")
                continue
            valley = _rightmost_negative_valley(
                mpf(seed_q), float(prev.y) - 10, precision=precision
            )
            if valley is None:
                failures.append(f"no negative valley at q = {seed_q}")
                continue
            try:
                cand = double_zero_solve(
                    seed_q, valley, tol=tol, precision=precision, index=n
                )
            except SpectrumError as exc:
                failures.append(str(exc))
                continue
            if cand.q_tilde > prev.q_tilde:
                entry = cand
                break
            failures.append(
                f"continuation landed at q = {mp.nstr(cand.q_tilde, 8)} "
                f"<= previous {mp.nstr(prev.q_tilde, 8)}"
            )
        if entry is None:
            raise SpectrumError(f"continuation failed at N = {n}: {failures}")
        entries.append(entry)

    if validate_counts:
        _validate_pair_transitions(entries, precision)
    return entries


def _validate_pair_transitions(entries: list[SpectrumEntry], precision: Precision) -> None:
    """Check that crossing each solved base adds exactly one conjugate pair."""
    from .zeros import Contour, winding_count

    box = Contour.rectangle(-60, 17.99, 0.02, 60)
    for entry in entries:
        lo = float(entry.q_tilde) - 0.01
        hi = float(entry.q_tilde) + 0.01
        if not (0 < lo and hi < 1):
            continue
        below = winding_count(lo, box, precision=precision).count
        above = winding_count(hi, box, precision=precision).count
        if above - below != 1:
            raise SpectrumError(
                f"pair count does not step by one across qt_{entry.n}: "
                f"{below} -> {above}"
            )
