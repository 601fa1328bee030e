"""Certified evaluation of the partial theta series and its relatives.

Evaluators return an :class:`EvaluatedValue`: a computed value paired with a
rigorous radius ``err`` bounding its distance to the exact sum.  Truncation
is controlled by a geometric-domination argument on consecutive term ratios;
arithmetic rounding is covered by a conservative forward-error bound on the
term recurrence and folded into ``err``.  Results are deterministic for a
fixed (inputs, precision) pair and exactly conjugate-symmetric in z.

The term-wise evaluator handles the base series

    theta(q, z) = sum_{j>=0} q^{j(j+1)/2} z^j,   0 < q < 1,

together with its z- and q-derivatives (term weights j, j(j-1), j(j+1)/2 and
mixed).  The bilateral sum, its negative-index tail G and the triple-product
form have dedicated routines.  Working precision is escalated automatically
(and deterministically) when magnitude growth or cancellation demands it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from mpmath import mp, mpc, mpf

__all__ = [
    "DEFAULT_PRECISION",
    "DomainError",
    "EvaluatedValue",
    "G_MIN_ABS_Z",
    "Precision",
    "QParam",
    "TruncationPlan",
    "as_qparam",
    "g_eval",
    "theta_dq",
    "theta_dz",
    "theta_dzq",
    "theta_dzz",
    "theta_eval",
    "theta_poly_eval",
    "theta_star_product",
    "theta_star_series",
    "truncation_cutoff",
]

_MIN_BITS = 64
_LN2 = math.log(2.0)

#: g_eval and the bilateral sum reject |z| at or below this margin: the
#: geometric control of the negative-index tail degrades as |z| -> 1.
G_MIN_ABS_Z = 1.05


class DomainError(ValueError):
    """Input outside the range where the evaluation is certified."""


@dataclass(frozen=True)
class Precision:
    """Significand width (bits) floor for all internal arithmetic.

    Evaluators escalate deterministically beyond ``working_bits`` when the
    requested accuracy demands it; they never go below.
    """

    working_bits: int = 128

    def __post_init__(self) -> None:
        if self.working_bits < _MIN_BITS:
            raise ValueError(f"working_bits must be >= {_MIN_BITS}")


DEFAULT_PRECISION = Precision()


@dataclass(frozen=True)
class QParam:
    """Series base q, restricted to the open interval (0, 1)."""

    q: mpf

    def __post_init__(self) -> None:
        qv = self.q
        if not isinstance(qv, mpf):
            with mp.workprec(120):
                qv = mpf(str(qv)) if isinstance(qv, str) else mpf(qv)
            object.__setattr__(self, "q", qv)
        if not mp.isfinite(self.q) or not (0 < self.q < 1):
            raise DomainError(f"q must lie strictly inside (0, 1), got {self.q}")

    def __float__(self) -> float:
        return float(self.q)


def as_qparam(q) -> QParam:
    return q if isinstance(q, QParam) else QParam(q)


@dataclass(frozen=True)
class EvaluatedValue:
    """A computed value with a guaranteed error radius.

    ``abs(value - exact) <= err`` holds unconditionally; downstream consumers
    may only assert facts robust to a perturbation of size ``err``.
    """

    value: mpc | mpf
    err: mpf
    cutoff: int | None = None

    def __post_init__(self) -> None:
        if self.err < 0 or not mp.isfinite(self.err):
            raise ValueError("err must be finite and nonnegative")

    @property
    def modulus(self) -> mpf:
        return abs(self.value)

    def lower_modulus(self) -> mpf:
        """Certified lower bound on the exact value's modulus."""
        m = abs(self.value) - self.err
        return m if m > 0 else mpf(0)


@dataclass(frozen=True)
class TruncationPlan:
    """Cutoff index J with a certified bound on sum_{j>J} q^{j(j+1)/2} r^j."""

    cutoff: int
    tail_bound: mpf


# ---------------------------------------------------------------------------
# planning: cutoffs and rigorous tail bounds
# ---------------------------------------------------------------------------


def _ln_float(x) -> float:
    # natural log of a positive mpf/number as a float; exponent-safe
    with mp.workprec(53):
        return float(mp.log(mpf(x)))


def _weight(j: int, dz: int, dq: int) -> int:
    # term weight for the (dz, dq) derivative; exact integer
    w = 1
    if dz == 1:
        w = j
    elif dz == 2:
        w = j * (j - 1)
    if dq:
        w *= j * (j + 1) // 2
    return w


def _first_index(dz: int, dq: int) -> int:
    return max(dz, 1 if dq else 0)


def _tail_bound_at(q: mpf, r: mpf, J: int, dz: int, dq: int) -> mpf:
    """Rigorous bound on sum_{j>J} |term_j|, valid when the term ratio at
    J+1 is below 3/4.  Upward slack folded in."""
    with mp.workprec(80):
        up = mpf(1) + mpf(2) ** (-40)
        w1 = _weight(J + 1, dz, dq)
        t1 = mpf(w1) * q ** ((J + 1) * (J + 2) // 2 - dq) * r ** (J + 1 - dz) * up * up
        rho = (mpf(_weight(J + 2, dz, dq)) / w1) * q ** (J + 2) * r * up
        if rho >= mpf("0.75"):
            raise ArithmeticError("tail ratio not under control")
        return t1 / (1 - rho) * up


def _plan_series(q: mpf, r: mpf, eps: mpf, dz: int = 0, dq: int = 0) -> tuple[int, mpf, float]:
    """Choose cutoff J and certify the tail for the weighted series.

    Rule: advance past the peak until consecutive term ratios fall below 1/2
    (the weight-growth factor is included exactly), then take the smallest J
    whose geometric tail bound term(J+1)/(1-ratio) is <= eps.

    Returns (J, tail_bound, ln_max_term).
    """
    rf, qf = float(r), float(q)
    j0 = _first_index(dz, dq)
    if rf == 0.0:
        return j0, mpf(0), 0.0
    lnq, lnr = math.log(qf), math.log(rf)
    ln_eps = _ln_float(eps)

    def ratio_log(j: int) -> float:
        return math.log(_weight(j + 1, dz, dq) / _weight(j, dz, dq)) + (j + 1) * lnq + lnr

    def term_log(j: int) -> float:
        tj = j * (j + 1) / 2.0
        return math.log(_weight(j, dz, dq)) + (tj - dq) * lnq + (j - dz) * lnr

    j = j0
    ln_t = term_log(j0)
    ln_max = ln_t
    half = math.log(0.5)
    while ratio_log(j) > half:
        ln_t += ratio_log(j)
        j += 1
        ln_max = max(ln_max, ln_t)
    # stop the float scan while the estimated tail is still clearly above
    # eps; the rigorous walk below then lands on the smallest certified J
    while ln_t + ratio_log(j) - half > ln_eps + 2.0:
        ln_t += ratio_log(j)
        j += 1
    tail = _tail_bound_at(q, r, j, dz, dq)
    while tail > eps:
        j += 1
        tail = _tail_bound_at(q, r, j, dz, dq)
    return j, tail, ln_max


def truncation_cutoff(q, r, eps, precision: Precision = DEFAULT_PRECISION) -> TruncationPlan:
    """Cutoff J with certified tail_bound <= eps for sum_{j>J} q^{j(j+1)/2} r^j.

    J is the smallest index, past the point where consecutive term ratios
    drop below 1/2, whose geometric tail bound meets eps; deterministic but
    not necessarily globally minimal.
    """
    qp = as_qparam(q)
    if eps <= 0:
        raise ValueError("eps must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    with mp.workprec(max(precision.working_bits, 80)):
        j, tail, _ = _plan_series(qp.q, mpf(r), mpf(eps))
    return TruncationPlan(cutoff=j, tail_bound=tail)


# ---------------------------------------------------------------------------
# core summation
# ---------------------------------------------------------------------------


def _sum_terms(q: mpf, z, J: int, dz: int, dq: int):
    """Sum w_j q^{T_j - dq} z^{j - dz} for j = j0..J at current precision.

    Returns (sum, abs_acc) where abs_acc bounds sum_j |term_j| from above
    (computed as |re| + |im| per term).  Real z stays on the mpf fast path.
    """
    j0 = _first_index(dz, dq)
    complex_path = isinstance(z, mpc) and z.imag != 0
    zv = z if complex_path else (z.real if isinstance(z, mpc) else mpf(z))
    # base_j = q^{T_j - dq} z^{j - dz}
    base = q ** (j0 * (j0 + 1) // 2 - dq)
    for _ in range(j0 - dz):
        base = base * zv
    qs = q ** (j0 + 1)
    s = mpc(0) if complex_path else mpf(0)
    aa = mpf(0)
    j = j0
    while True:
        w = _weight(j, dz, dq)
        term = base if w == 1 else w * base
        s += term
        if complex_path:
            aa += abs(term.real) + abs(term.imag)
        else:
            aa += abs(term)
        if j == J:
            return s, aa
        base = base * qs * zv
        qs = qs * q
        j += 1


def _noise_bound(abs_acc: mpf, J: int, prec: int) -> mpf:
    # forward-error envelope: per-step relative damage <= c*2^-prec, the
    # q-power chain contributes up to j*2^-prec at step j, hence the (J+2)^2
    return abs_acc * mpf(8 * (J + 2) * (J + 2)) * mpf(2) ** (1 - prec)


def _eval_theta_family(q: QParam, z, eps, precision: Precision, dz: int, dq: int) -> EvaluatedValue:
    if eps <= 0:
        raise ValueError("eps must be positive")
    qv = q.q
    with mp.workprec(max(precision.working_bits, 80)):
        zin = mpf(z) if isinstance(z, (int, float)) else (+z if isinstance(z, (mpf, mpc)) else mpc(z))
        r = abs(zin)
        eps_m = mpf(eps)
        J, tail, ln_max = _plan_series(qv, mpf(r), eps_m / 2, dz, dq)

    ln_eps2 = _ln_float(eps_m / 2)
    bits = max(
        precision.working_bits,
        int((max(ln_max, 0.0) - ln_eps2) / _LN2) + 4 * int(math.log2(J + 2)) + 32,
    )
    for _ in range(8):
        with mp.workprec(bits):
            s, aa = _sum_terms(qv, zin, J, dz, dq)
            noise = _noise_bound(aa, J, bits)
            err = tail + noise
            if err <= eps_m:
                return EvaluatedValue(value=s, err=+err, cutoff=J)
            short = _ln_float(err / eps_m)
        bits += max(64, int(short / _LN2) + 16)
    raise ArithmeticError("precision escalation failed to certify the sum")


def theta_eval(q, z, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """Partial theta sum_{j>=0} q^{j(j+1)/2} z^j with |value - exact| <= err <= eps."""
    return _eval_theta_family(as_qparam(q), z, eps, precision, dz=0, dq=0)


def theta_dz(q, z, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """First z-derivative, term-wise: sum_{j>=1} j q^{j(j+1)/2} z^{j-1}."""
    return _eval_theta_family(as_qparam(q), z, eps, precision, dz=1, dq=0)


def theta_dzz(q, z, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """Second z-derivative, term-wise: sum_{j>=2} j(j-1) q^{j(j+1)/2} z^{j-2}."""
    return _eval_theta_family(as_qparam(q), z, eps, precision, dz=2, dq=0)


def theta_dq(q, z, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """q-derivative, term-wise: sum_{j>=1} (j(j+1)/2) q^{j(j+1)/2 - 1} z^j."""
    return _eval_theta_family(as_qparam(q), z, eps, precision, dz=0, dq=1)


def theta_dzq(q, z, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """Mixed second derivative (d/dz then d/dq), term-wise."""
    return _eval_theta_family(as_qparam(q), z, eps, precision, dz=1, dq=1)


def theta_poly_eval(q, z, degree: int, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """Degree-``degree`` truncation sum_{j<=degree} q^{j(j+1)/2} z^j, certified.

    Only arithmetic noise contributes to err (no truncation term), so err is
    driven well below eps by escalation.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if degree < 0:
        raise ValueError("degree must be nonnegative")
    qp = as_qparam(q)
    qv = qp.q
    with mp.workprec(max(precision.working_bits, 80)):
        zin = mpf(z) if isinstance(z, (int, float)) else (+z if isinstance(z, (mpf, mpc)) else mpc(z))
        r = float(abs(zin))
        eps_m = mpf(eps)
    if r == 0.0:
        return EvaluatedValue(value=mpf(1), err=mpf(0), cutoff=degree)
    lnq, lnr = math.log(float(qv)), math.log(r)
    ln_max = max((j * (j + 1) / 2.0) * lnq + j * lnr for j in range(degree + 1))
    bits = max(
        precision.working_bits,
        int((max(ln_max, 0.0) - _ln_float(eps_m)) / _LN2) + 4 * int(math.log2(degree + 2)) + 32,
    )
    for _ in range(8):
        with mp.workprec(bits):
            s, aa = _sum_terms(qv, zin, degree, 0, 0)
            err = _noise_bound(aa, degree, bits)
            if err <= eps_m:
                return EvaluatedValue(value=s, err=+err, cutoff=degree)
            short = _ln_float(err / eps_m)
        bits += max(64, int(short / _LN2) + 16)
    raise ArithmeticError("precision escalation failed to certify the sum")


# ---------------------------------------------------------------------------
# negative-index tail, bilateral sum, triple product
# ---------------------------------------------------------------------------


def _check_outside_unit(absz: mpf) -> None:
    if not absz > G_MIN_ABS_Z:
        raise DomainError(
            f"|z| = {mp.nstr(absz, 8)} is outside guaranteed convergence "
            f"control (need |z| > {G_MIN_ABS_Z})"
        )


def g_eval(q, z, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """Negative-index tail G(q, z) = sum_{k>=1} q^{k(k-1)/2} z^{-k}.

    Requires |z| > 1.05.  The exact value satisfies |G| <= 1/(|z| - 1), so
    the computed one satisfies |value| <= 1/(|z| - 1) + err.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    qp = as_qparam(q)
    qv = qp.q
    bits = max(precision.working_bits, int(-_ln_float(eps) / _LN2) + 48, 96)
    with mp.workprec(bits):
        complex_path = not isinstance(z, (int, float, mpf))
        zv = mpc(z) if complex_path else mpf(z)
        if complex_path and zv.imag == 0:
            complex_path = False
            zv = zv.real
        r = abs(zv)
        _check_outside_unit(r)
        inv = 1 / zv
        eps_m = mpf(eps)
        # terms u_k = q^{k(k-1)/2} z^{-k}; ratio u_{k+1}/u_k = q^k / |z| < 1
        up = mpf(1) + mpf(2) ** (-40)

        def tail_at(K: int) -> mpf:
            t_next = qv ** (K * (K + 1) // 2) / r ** (K + 1) * up
            rho = qv ** (K + 1) / r * up
            return t_next / (1 - rho) * up

        K = 1
        while tail_at(K) > eps_m / 2:
            K += 1
        tail = tail_at(K)
        s = mpc(0) if complex_path else mpf(0)
        u = inv
        qs = qv
        aa = mpf(0)
        for _k in range(1, K + 1):
            s += u
            aa += (abs(u.real) + abs(u.imag)) if complex_path else abs(u)
            u = u * qs * inv
            qs = qs * qv
        err = tail + _noise_bound(aa, K, bits)
        if err > eps_m:
            raise ArithmeticError("g_eval could not certify the requested eps")
        return EvaluatedValue(value=s, err=+err, cutoff=K)


def theta_star_series(q, z, eps, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """Bilateral sum over all integer j of q^{j(j+1)/2} z^j, single-pass.

    Requires |z| > 1.05 so the negative-index side is geometrically
    controlled; the positive side reuses the theta truncation plan.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    qp = as_qparam(q)
    qv = qp.q
    with mp.workprec(max(precision.working_bits, 96)):
        complex_path = not isinstance(z, (int, float, mpf))
        zv = mpc(z) if complex_path else mpf(z)
        if complex_path and zv.imag == 0:
            complex_path = False
            zv = zv.real
        r = abs(zv)
        _check_outside_unit(r)
        eps_m = mpf(eps)
        Jp, tail_p, ln_max = _plan_series(qv, mpf(r), eps_m / 4)
        up = mpf(1) + mpf(2) ** (-40)

        def tail_neg(K: int) -> mpf:
            t_next = qv ** (K * (K + 1) // 2) / r ** (K + 1) * up
            rho = qv ** (K + 1) / r * up
            return t_next / (1 - rho) * up

        K = 1
        while tail_neg(K) > eps_m / 4:
            K += 1
        tail_n = tail_neg(K)

    n_terms = Jp + K + 1
    bits = max(
        precision.working_bits,
        int((max(ln_max, 0.0) - _ln_float(eps_m / 4)) / _LN2) + 4 * int(math.log2(n_terms + 2)) + 32,
    )
    for _ in range(8):
        with mp.workprec(bits):
            zv2 = mpc(z) if complex_path else (mpf(z) if isinstance(z, (int, float)) else +mpc(z).real)
            inv = 1 / zv2
            # ascending pass j = -K .. Jp; term(-K) = q^{K(K-1)/2} z^{-K}
            term = qv ** (K * (K - 1) // 2) * inv**K
            qs = qv ** (-(K - 1))
            s = mpc(0) if complex_path else mpf(0)
            aa = mpf(0)
            for _j in range(-K, Jp + 1):
                s += term
                aa += (abs(term.real) + abs(term.imag)) if complex_path else abs(term)
                term = term * qs * zv2
                qs = qs * qv
            err = tail_p + tail_n + _noise_bound(aa, n_terms, bits)
            if err <= eps_m:
                return EvaluatedValue(value=s, err=+err, cutoff=Jp)
            short = _ln_float(err / eps_m)
        bits += max(64, int(short / _LN2) + 16)
    raise ArithmeticError("bilateral sum could not certify the requested eps")


def theta_star_product(q, z, eps_rel, precision: Precision = DEFAULT_PRECISION) -> EvaluatedValue:
    """Triple-product form prod_{m>=1} (1-q^m)(1+z q^m)(1+q^{m-1}/z).

    The returned err is absolute; when the exact value is nonzero the
    relative error is <= eps_rel.  z = 0 is rejected (reciprocal factors
    are singular there).
    """
    if eps_rel <= 0:
        raise ValueError("eps_rel must be positive")
    qp = as_qparam(q)
    if z == 0:
        raise DomainError("triple product is singular at z = 0")
    qv = qp.q
    bits = max(precision.working_bits, int(-_ln_float(eps_rel) / _LN2) + 64, 128)
    with mp.workprec(bits):
        complex_path = not isinstance(z, (int, float, mpf))
        zv = mpc(z) if complex_path else mpf(z)
        if complex_path and zv.imag == 0:
            complex_path = False
            zv = zv.real
        r = abs(zv)
        inv = 1 / zv
        # group deviation d_m = q^m (1 + |z|) + q^{m-1}/|z|: stop once the
        # aggregate tail deviation exp(sum_{m>M} d_m) - 1 clears eps_rel/2
        qf, rf = float(qv), float(r)
        M = 1
        while (qf ** (M + 1) * (1 + rf) + qf**M / rf) / (1 - qf) > min(0.25, float(eps_rel) / 4):
            M += 1
        with mp.workprec(96):
            up = mpf(1) + mpf(2) ** (-40)
            s_tail = (qv ** (M + 1) * (1 + r) + qv**M / r) / (1 - qv) * up
            trunc_rel = mp.expm1(s_tail) * up
        p = mpc(1) if complex_path else mpf(1)
        log_upper = mpf(0)  # log of prod over m of (|f_m| + rounding pad)
        pad_unit = mpf(2) ** (6 - bits)
        qm = qv
        qm1 = mpf(1)
        for _m in range(1, M + 1):
            f = (1 - qm) * (1 + zv * qm) * (1 + qm1 * inv)
            pad = pad_unit * (1 + qm * (1 + r)) * (1 + qm1 / r) * 8
            log_upper += mp.log(abs(f) + pad)
            p = p * f
            qm1 = qm
            qm = qm * qv
        upper = mp.exp(log_upper)
        round_rel = mpf(8 * (M + 2) * (M + 2)) * mpf(2) ** (1 - bits)
        err = upper * (trunc_rel + round_rel + trunc_rel * round_rel)
        return EvaluatedValue(value=p, err=+err, cutoff=M)
