"""Zero counting, location and certified isolation for theta(q, .).

Counting is by the argument principle: the winding number of theta along a
closed contour equals the number of interior zeros.  Contours are sampled
adaptively until consecutive phase increments drop below pi/2 and every
sample's certified modulus clears a floor; location is by recursive box
subdivision down to isolated (count one) boxes, refined by Newton steps.

A truncated-series comparison certificate is provided: when the degree-d
truncation dominates the discarded tail everywhere on a contour, the full
series and the truncation have the same number of interior zeros.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

from mpmath import mp, mpc, mpf

from .reports import CertificateReport
from .series import (
    DEFAULT_PRECISION,
    EvaluatedValue,
    Precision,
    QParam,
    as_qparam,
    theta_dz,
    theta_eval,
    theta_poly_eval,
)
from .series import _tail_bound_at  # shared rigorous tail machinery

__all__ = [
    "Contour",
    "ContourTooClose",
    "NewtonError",
    "NonIntegerWinding",
    "RefinementLimit",
    "RoucheInconclusive",
    "WindingResult",
    "ZeroFinderError",
    "ZeroRecord",
    "count_zeros",
    "find_zeros",
    "refine_zero",
    "rouche_certify",
    "winding_count",
]

DEFAULT_FLOOR = 1e-8
_MIN_BOX_SIDE = 1e-6
_MAX_CONTOUR_SAMPLES = 1 << 20


class ZeroFinderError(RuntimeError):
    pass


class ContourTooClose(ZeroFinderError):
    """Adaptive sampling drove the certified contour modulus below the floor."""

    def __init__(self, message: str, z=None):
        super().__init__(message)
        self.z = z


class NonIntegerWinding(ZeroFinderError):
    """Accumulated phase is not an integer multiple of 2*pi within tolerance."""


class RefinementLimit(ZeroFinderError):
    """Sample cap reached before the phase increments settled."""


class NewtonError(ZeroFinderError):
    """Newton refinement diverged or hit a vanishing derivative."""


class RoucheInconclusive(ZeroFinderError):
    """Margin too small relative to evaluation error to decide the comparison."""

    def __init__(self, message: str, report: CertificateReport | None = None):
        super().__init__(message)
        self.report = report


# ---------------------------------------------------------------------------
# contours
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Contour:
    """Closed, simple, piecewise-smooth curve, counterclockwise.

    Parametrized by arc length over t in [0, 1).  Kinds: axis-aligned
    ``rectangle``; ``circle``; right ``half_disk`` of given radius (arc
    through the positive real axis plus the diameter on the imaginary
    axis); ``half_annulus`` between two radii in the right half-plane.
    """

    kind: str
    params: tuple

    # -- constructors -------------------------------------------------
    @staticmethod
    def rectangle(x0: float, x1: float, y0: float, y1: float) -> "Contour":
        if not (x0 < x1 and y0 < y1):
            raise ValueError("rectangle needs x0 < x1 and y0 < y1")
        return Contour("rectangle", (mpf(x0), mpf(x1), mpf(y0), mpf(y1)))

    @staticmethod
    def circle(cx: float, cy: float, r: float) -> "Contour":
        if r <= 0:
            raise ValueError("circle needs r > 0")
        return Contour("circle", (mpf(cx), mpf(cy), mpf(r)))

    @staticmethod
    def half_disk(radius: float) -> "Contour":
        if radius <= 0:
            raise ValueError("half_disk needs radius > 0")
        return Contour("half_disk", (mpf(radius),))

    @staticmethod
    def half_annulus(r_in: float, r_out: float) -> "Contour":
        if not 0 < r_in < r_out:
            raise ValueError("half_annulus needs 0 < r_in < r_out")
        return Contour("half_annulus", (mpf(r_in), mpf(r_out)))

    # -- geometry ------------------------------------------------------
    def perimeter(self) -> mpf:
        if self.kind == "rectangle":
            x0, x1, y0, y1 = self.params
            return 2 * ((x1 - x0) + (y1 - y0))
        if self.kind == "circle":
            return 2 * mp.pi * self.params[2]
        if self.kind == "half_disk":
            (r,) = self.params
            return mp.pi * r + 2 * r
        if self.kind == "half_annulus":
            r_in, r_out = self.params
            return mp.pi * (r_in + r_out) + 2 * (r_out - r_in)
        raise ValueError(f"unknown contour kind {self.kind!r}")

    def max_abs(self) -> mpf:
        """max |z| over the contour (hence over its interior)."""
        if self.kind == "rectangle":
            x0, x1, y0, y1 = self.params
            return max(abs(mpc(x, y)) for x in (x0, x1) for y in (y0, y1))
        if self.kind == "circle":
            cx, cy, r = self.params
            return abs(mpc(cx, cy)) + r
        if self.kind == "half_disk":
            return self.params[0]
        if self.kind == "half_annulus":
            return self.params[1]
        raise ValueError(f"unknown contour kind {self.kind!r}")

    def point(self, t: float) -> mpc:
        """Point at arc-length fraction t (counterclockwise, interior left)."""
        t = t % 1.0
        if self.kind == "rectangle":
            x0, x1, y0, y1 = self.params
            w, h = x1 - x0, y1 - y0
            per = 2 * (w + h)
            s = mpf(t) * per
            if s < w:
                return mpc(x0 + s, y0)
            s -= w
            if s < h:
                return mpc(x1, y0 + s)
            s -= h
            if s < w:
                return mpc(x1 - s, y1)
            s -= w
            return mpc(x0, y1 - s)
        if self.kind == "circle":
            cx, cy, r = self.params
            ang = 2 * mp.pi * mpf(t)
            return mpc(cx + r * mp.cos(ang), cy + r * mp.sin(ang))
        if self.kind == "half_disk":
            (r,) = self.params
            arc = mp.pi * r
            per = arc + 2 * r
            s = mpf(t) * per
            if s < arc:  # arc from -i r to +i r through +r
                ang = -mp.pi / 2 + s / r
                return mpc(r * mp.cos(ang), r * mp.sin(ang))
            s -= arc
            return mpc(0, r - s)  # diameter, +i r down to -i r
        if self.kind == "half_annulus":
            r_in, r_out = self.params
            arc_out = mp.pi * r_out
            arc_in = mp.pi * r_in
            gap = r_out - r_in
            per = arc_out + arc_in + 2 * gap
            s = mpf(t) * per
            if s < arc_out:  # outer arc, -i r_out to +i r_out through +r_out
                ang = -mp.pi / 2 + s / r_out
                return mpc(r_out * mp.cos(ang), r_out * mp.sin(ang))
            s -= arc_out
            if s < gap:  # +i r_out down to +i r_in
                return mpc(0, r_out - s)
            s -= gap
            if s < arc_in:  # inner arc traversed clockwise, +i r_in to -i r_in
                ang = mp.pi / 2 - s / r_in
                return mpc(r_in * mp.cos(ang), r_in * mp.sin(ang))
            s -= arc_in
            return mpc(0, -r_in - s)  # -i r_in down to -i r_out
        raise ValueError(f"unknown contour kind {self.kind!r}")

    def contains(self, z) -> bool:
        """Strict interior membership."""
        zc = mpc(z)
        x, y = zc.real, zc.imag
        if self.kind == "rectangle":
            x0, x1, y0, y1 = self.params
            return x0 < x < x1 and y0 < y < y1
        if self.kind == "circle":
            cx, cy, r = self.params
            return abs(zc - mpc(cx, cy)) < r
        if self.kind == "half_disk":
            return x > 0 and abs(zc) < self.params[0]
        if self.kind == "half_annulus":
            r_in, r_out = self.params
            return x > 0 and r_in < abs(zc) < r_out
        raise ValueError(f"unknown contour kind {self.kind!r}")


@dataclass(frozen=True)
class ZeroRecord:
    """One located zero (or unresolved cluster when refined is False and
    multiplicity > 1): parameter q, location, certified residual |theta|."""

    q: QParam
    z: mpc
    residual: mpf
    refined: bool
    multiplicity: int = 1

    def conjugate(self) -> "ZeroRecord":
        return replace(self, z=mpc(self.z.real, -self.z.imag))


@dataclass(frozen=True)
class WindingResult:
    count: int
    min_modulus: mpf
    samples: int


# ---------------------------------------------------------------------------
# contour evaluation and winding
# ---------------------------------------------------------------------------


def _contour_eval(q: QParam, z, floor, precision: Precision, rel: float = 1e-6) -> EvaluatedValue:
    """theta on a contour: cheap magnitude-adaptive accuracy.

    Guarantees err <= max(|value| * rel, floor/100): enough to certify both
    the phase increments and the floor check, without paying for absolute
    accuracy at points where |theta| is astronomically large.
    """
    floor_eps = mpf(floor) / 100
    # coarse first pass: the plan's ln_max gives a magnitude ceiling
    from .series import _plan_series  # local import to keep the hot path lean

    with mp.workprec(64):
        r = abs(mpc(z))
        _, _, ln_max = _plan_series(q.q, mpf(r), mpf(1), 0, 0)
        eps = max(floor_eps, mp.exp(mpf(ln_max)) * mpf(2) ** (-70))
    for _ in range(8):
        v = theta_eval(q, z, eps, precision)
        target = max(abs(v.value) * mpf(rel), floor_eps)
        if v.err <= target:
            return v
        eps = max(target / 2, v.err * mpf(2) ** (-40), floor_eps)
    raise ArithmeticError("contour evaluation failed to stabilize")


def _adaptive_winding(
    evaluate,
    contour: Contour,
    floor,
    initial_samples: int = 32,
    max_samples: int = _MAX_CONTOUR_SAMPLES,
) -> WindingResult:
    """Shared adaptive argument-principle engine.

    ``evaluate(z)`` must return an EvaluatedValue whose err is small against
    its modulus.  Segments are split until (a) phase increments between
    consecutive samples are below pi/2 and (b) the modulus varies by at most
    25% across each segment; (b) forces the sample spacing below the
    distance to any zero lurking just off the contour, which closes the
    phase-aliasing hole a floor check alone leaves open.
    """
    floor_m = mpf(floor)
    vals: dict[float, EvaluatedValue] = {}

    def sample(t: float) -> None:
        z = contour.point(t)
        v = evaluate(z)
        vals[t] = v
        if v.lower_modulus() < floor_m:
            raise ContourTooClose(
                f"contour too close to a zero: certified modulus "
                f"{mp.nstr(v.lower_modulus(), 6)} < floor {mp.nstr(floor_m, 6)} "
                f"at t = {t}",
                z=z,
            )

    ts = [i / initial_samples for i in range(initial_samples)]
    for t in ts:
        sample(t)

    pair_cache: dict[tuple[float, float], tuple[float, float, float]] = {}

    def seg_data(a: float, b: float) -> tuple[float, float, float]:
        # (phase increment, |f(b)-f(a)|, min endpoint modulus) for arc a->b
        key = (a, b)
        if key not in pair_cache:
            va, vb = vals[a].value, vals[b].value
            with mp.workprec(60):
                d = float(mp.arg(vb / va))
                diff = abs(vb - va)
                lo = min(abs(va), abs(vb))
                # scale-free floats; both can overflow doubles, so take the
                # ratio in mpf first
                ratio = float(diff / lo) if lo > 0 else math.inf
            pair_cache[key] = (d, ratio, float(b - a if b > a else 1.0 - a))
        return pair_cache[key]

    while True:
        pts = ts + [1.0]
        n_seg = len(pts) - 1
        dphis, ratios, lens = [], [], []
        for a, b in zip(pts, pts[1:]):
            bb = b if b < 1.0 else 0.0
            d, ratio, _l = seg_data(a, bb)
            dphis.append(d)
            ratios.append(ratio)
            lens.append(b - a)
        # secant slope per segment, in modulus-relative units per t
        slopes = [ratios[i] / lens[i] if lens[i] > 0 else math.inf for i in range(n_seg)]
        inserts = []
        for i in range(n_seg):
            nb = max(
                slopes[i],
                slopes[i - 1] if i > 0 else slopes[-1],
                slopes[i + 1] if i + 1 < n_seg else slopes[0],
            )
            if abs(dphis[i]) >= math.pi / 2 or lens[i] * nb > 0.5:
                inserts.append((pts[i] + pts[i + 1]) / 2)
        if not inserts:
            break
        if len(ts) + len(inserts) > max_samples:
            raise RefinementLimit(f"contour sample cap {max_samples} reached")
        for t in inserts:
            sample(t)
        ts = sorted(set(ts) | set(inserts))

    total = 0.0
    minmod = mpf("inf")
    pts = ts + [1.0]
    for a, b in zip(pts, pts[1:]):
        bb = b if b < 1.0 else 0.0
        total += seg_data(a, bb)[0]
        m = vals[a].lower_modulus()
        if m < minmod:
            minmod = m
    w = total / (2 * math.pi)
    count = round(w)
    if abs(w - count) > 0.01:
        raise NonIntegerWinding(f"phase sum / 2 pi = {w:.6f} is not an integer")
    if count < 0:
        raise NonIntegerWinding(f"negative winding {count} on a counterclockwise contour")
    return WindingResult(count=count, min_modulus=minmod, samples=len(ts))


def winding_count(
    q,
    contour: Contour,
    floor: float = DEFAULT_FLOOR,
    precision: Precision = DEFAULT_PRECISION,
    initial_samples: int = 32,
    max_samples: int = _MAX_CONTOUR_SAMPLES,
) -> WindingResult:
    """Number of zeros of theta(q, .) strictly inside the contour.

    Valid provided the reported min_modulus clears ``floor`` and the
    adaptive refinement converged; those conditions failing raises
    ContourTooClose / RefinementLimit / NonIntegerWinding rather than
    returning a count.
    """
    if floor <= 0:
        raise ValueError("floor must be positive")
    qp = as_qparam(q)
    floor_m = mpf(floor)
    return _adaptive_winding(
        lambda z: _contour_eval(qp, z, floor_m, precision),
        contour,
        floor_m,
        initial_samples,
        max_samples,
    )


def count_zeros(q, contour: Contour, floor: float = DEFAULT_FLOOR,
                precision: Precision = DEFAULT_PRECISION) -> int:
    return winding_count(q, contour, floor, precision).count


# ---------------------------------------------------------------------------
# refinement
# ---------------------------------------------------------------------------


def refine_zero(
    q,
    seed,
    tol: float = 1e-12,
    max_iter: int = 60,
    precision: Precision = DEFAULT_PRECISION,
) -> ZeroRecord:
    """Plain Newton iteration z <- z - theta/theta_dz from the seed.

    Succeeds when the certified residual |theta| + err drops below tol.
    Raises NewtonError on divergence or a vanishing derivative.
    """
    if tol <= 0:
        raise ValueError("tol must be positive")
    qp = as_qparam(q)
    tol_m = mpf(tol)
    eps = tol_m / 8
    complex_seed = isinstance(seed, (complex, mpc)) and mpc(seed).imag != 0
    with mp.workprec(max(precision.working_bits, 64)):
        z = mpc(seed) if complex_seed else mpf(mpc(seed).real)
    for _ in range(max_iter):
        f = theta_eval(qp, z, eps, precision)
        if abs(f.value) + f.err <= tol_m:
            return ZeroRecord(q=qp, z=z, residual=abs(f.value) + f.err, refined=True)
        d = theta_dz(qp, z, eps, precision)
        if abs(d.value) <= 10 * d.err:
            raise NewtonError(f"derivative vanished near z = {mp.nstr(z, 10)}")
        with mp.workprec(max(precision.working_bits, 64)):
            z = z - f.value / d.value
    raise NewtonError(f"Newton did not reach residual {tol} in {max_iter} steps")


# ---------------------------------------------------------------------------
# subdivision search
# ---------------------------------------------------------------------------

#: inward insets tried for the outer search boundary; zeros within the chosen
#: inset of the requested region edge count as boundary zeros (excluded)
_ROOT_INSETS = (0.0, 1e-9, 1e-7, 1e-5, 1e-4, 1e-3)
#: split positions (fraction of the longer side) tried until both children
#: count cleanly and reconcile with the parent
_SPLIT_FRACTIONS = (0.5, 0.5369, 0.4521, 0.5871, 0.4117, 0.6233, 0.3731)


@dataclass(frozen=True)
class _Box:
    x0: float
    x1: float
    y0: float
    y1: float

    def contour(self) -> Contour:
        return Contour.rectangle(self.x0, self.x1, self.y0, self.y1)

    def center(self) -> mpc:
        return mpc((self.x0 + self.x1) / 2, (self.y0 + self.y1) / 2)

    def min_side(self) -> float:
        return min(self.x1 - self.x0, self.y1 - self.y0)

    def shrunk(self, d: float) -> "_Box":
        return _Box(self.x0 + d, self.x1 - d, self.y0 + d, self.y1 - d)

    def contains(self, z, slack: float = 0.0) -> bool:
        zc = mpc(z)
        return (self.x0 - slack <= zc.real <= self.x1 + slack
                and self.y0 - slack <= zc.imag <= self.y1 + slack)


class _RootEdgeHot(ZeroFinderError):
    """A zero sits (numerically) on the outer search boundary; retry with a
    deeper root inset."""


def find_zeros(
    q,
    region: Contour,
    tol: float = 1e-12,
    floor: float = DEFAULT_FLOOR,
    precision: Precision = DEFAULT_PRECISION,
) -> list[ZeroRecord]:
    """All zeros of theta(q, .) strictly inside the region, refined to tol.

    Recursive bisection of the bounding box.  Split lines through (or too
    near) a zero are re-chosen from a jitter ladder, so every box boundary
    is certified zero-free and child counts reconcile exactly with their
    parent.  Zeros within the root inset (at most 1e-3, usually 0) of the
    requested region boundary are treated as boundary zeros and excluded,
    which matches the strict-interior contract.  Boxes at the minimal side
    length still holding more than one zero are reported as unresolved
    clusters (refined=False, multiplicity=count) rather than dropped.
    """
    qp = as_qparam(q)
    if region.kind == "rectangle":
        x0, x1, y0, y1 = (float(v) for v in region.params)
    elif region.kind == "half_disk":
        r = float(region.params[0])
        x0, x1, y0, y1 = 0.0, r, -r, r
    elif region.kind == "circle":
        cx, cy, r = (float(v) for v in region.params)
        x0, x1, y0, y1 = cx - r, cx + r, cy - r, cy + r
    elif region.kind == "half_annulus":
        r = float(region.params[1])
        x0, x1, y0, y1 = 0.0, r, -r, r
    else:
        raise ValueError(f"unknown region kind {region.kind!r}")

    last_exc: Exception | None = None
    for inset in _ROOT_INSETS:
        root = _Box(x0, x1, y0, y1).shrunk(inset)
        if root.min_side() <= 0:
            break
        try:
            recs = _search_box(qp, root, tol, floor, precision)
            return [rec for rec in recs if region.contains(rec.z)]
        except (_RootEdgeHot, ContourTooClose, NonIntegerWinding, RefinementLimit) as exc:
            last_exc = exc
    raise ZeroFinderError(f"could not establish a zero-free search boundary: {last_exc}")


def _on_edge(z, box: _Box, tol: float = 1e-9) -> bool:
    zc = mpc(z)
    x, y = float(zc.real), float(zc.imag)
    return (
        abs(x - box.x0) <= tol or abs(x - box.x1) <= tol
        or abs(y - box.y0) <= tol or abs(y - box.y1) <= tol
    )


def _search_box(q: QParam, root: _Box, tol, floor, precision) -> list[ZeroRecord]:
    """Count the root box, then recursively isolate its zeros.

    Raises _RootEdgeHot when any contour failure happens on the root
    boundary (the caller retries with a deeper inset).
    """
    found: list[ZeroRecord] = []

    def count(box: _Box) -> int:
        try:
            return winding_count(q, box.contour(), floor, precision).count
        except ContourTooClose as exc:
            if exc.z is not None and _on_edge(exc.z, root):
                raise _RootEdgeHot(str(exc))
            raise

    def locate(box: _Box, n: int) -> None:
        if n == 0:
            return
        if n == 1:
            try:
                rec = refine_zero(q, box.center(), tol, precision=precision)
                if box.contains(rec.z, slack=1e-9 * max(1.0, box.min_side())):
                    found.append(rec)
                    return
            except NewtonError:
                pass
        if box.min_side() < _MIN_BOX_SIDE:
            c = box.center()
            res = theta_eval(q, c, tol, precision)
            found.append(ZeroRecord(q=q, z=c, residual=abs(res.value) + res.err,
                                    refined=False, multiplicity=n))
            return
        vertical = (box.x1 - box.x0) >= (box.y1 - box.y0)
        last: Exception | None = None
        for frac in _SPLIT_FRACTIONS:
            if vertical:
                s = box.x0 + frac * (box.x1 - box.x0)
                kids = (_Box(box.x0, s, box.y0, box.y1), _Box(s, box.x1, box.y0, box.y1))
            else:
                s = box.y0 + frac * (box.y1 - box.y0)
                kids = (_Box(box.x0, box.x1, box.y0, s), _Box(box.x0, box.x1, s, box.y1))
            try:
                counts = [count(kid) for kid in kids]
            except (ContourTooClose, NonIntegerWinding, RefinementLimit) as exc:
                last = exc
                continue
            if sum(counts) != n:
                last = ZeroFinderError(
                    f"children count {sum(counts)} != parent {n} at split {s}"
                )
                continue
            for kid, kc in zip(kids, counts):
                locate(kid, kc)
            return
        raise ZeroFinderError(f"no clean split found for box "
                              f"[{box.x0},{box.x1}]x[{box.y0},{box.y1}]: {last}")

    locate(root, count(root))
    found.sort(key=lambda rec: (float(mpc(rec.z).real), float(mpc(rec.z).imag)))
    return found


# ---------------------------------------------------------------------------
# truncation-dominance certificate
# ---------------------------------------------------------------------------


def rouche_certify(
    q,
    degree: int,
    contour: Contour,
    eval_eps: float = 1e-30,
    floor: float = DEFAULT_FLOOR,
    precision: Precision = DEFAULT_PRECISION,
    rel_gap: float = 0.01,
    max_nodes: int = 60000,
) -> CertificateReport:
    """Certify that the degree-``degree`` truncation dominates the discarded
    tail everywhere on the contour, so both functions have the same number
    of zeros inside.

    The truncation's modulus is lower-bounded on every boundary arc via a
    derivative (Lipschitz) bound on the enclosing disk; the tail is bounded
    at the contour's maximal |z|.  Raises RoucheInconclusive when the margin
    is within 10x the combined evaluation error.
    """
    if degree < 1:
        raise ValueError("degree must be >= 1")
    qp = as_qparam(q)
    qv = qp.q
    with mp.workprec(max(precision.working_bits, 80)):
        r_max = contour.max_abs()
        tail = _tail_bound_at(qv, mpf(r_max), degree, 0, 0)
        # Lipschitz bound for the truncation's derivative on |z| <= r_max
        up = mpf(1) + mpf(2) ** (-40)
        lip = mpf(0)
        for j in range(1, degree + 1):
            lip += j * qv ** (j * (j + 1) // 2) * r_max ** (j - 1)
        lip = lip * up
        length = contour.perimeter()

    eval_eps_m = mpf(eval_eps)

    vals: dict[float, mpf] = {}

    def modulus(t: float) -> mpf:
        if t not in vals:
            v = theta_poly_eval(qp, contour.point(t), degree, eval_eps_m, precision)
            vals[t] = abs(v.value) - v.err
        return vals[t]

    # segment queue: certified lower bound on each arc
    n0 = 64
    nodes = sorted({i / n0 for i in range(n0)})

    def seg_lb(a: float, b: float) -> mpf:
        arc = length * (b - a)
        return min(modulus(a), modulus(b % 1.0)) - lip * arc / 2

    while True:
        pts = nodes + [1.0]
        best_sample = min(modulus(t) for t in nodes)
        glb = min(seg_lb(a, b) for a, b in zip(pts, pts[1:]))
        if glb >= best_sample * (1 - rel_gap):
            break
        if len(nodes) >= max_nodes:
            break
        new = []
        for a, b in zip(pts, pts[1:]):
            if seg_lb(a, b) < best_sample * (1 - rel_gap / 2):
                new.append((a + b) / 2)
        nodes = sorted(set(nodes) | set(new))

    min_lb = min(seg_lb(a, b) for a, b in zip(nodes + [1.0], (nodes + [1.0])[1:]))
    sampled_min = min(modulus(t) for t in nodes)

    report = CertificateReport(
        lemma_id=f"truncation-dominance(degree={degree})",
        inputs={"q": qv, "degree": degree, "contour": contour.kind, "r_max": r_max},
        quantities={
            "tail_bound": tail,
            "contour_min_lower_bound": min_lb,
            "min_sampled_modulus": sampled_min,
            "derivative_bound": lip,
            "samples": len(nodes),
        },
    )
    margin = min_lb - tail
    if margin < 10 * (2 * eval_eps_m):
        raise RoucheInconclusive(
            "contour modulus not bounded away from the tail at this evaluation "
            f"accuracy (margin {mp.nstr(margin, 4)})",
            report,
        )
    report.check("truncation dominates tail on contour", min_lb, tail)
    # dual route: equal interior counts for the full series and the truncation;
    # the certified contour minimum justifies the winding floor
    route_floor = min(mpf(floor), (min_lb - tail) / 2)
    w_full = winding_count(qp, contour, route_floor, precision)

    def poly_eval(qq, z, eps, prec):
        return theta_poly_eval(qq, z, degree, eps, prec)

    w_poly = _winding_of(poly_eval, qp, contour, route_floor, precision)
    report.quantities["zeros_inside_full"] = w_full.count
    report.quantities["zeros_inside_truncation"] = w_poly.count
    report.check("interior zero counts coincide",
                 mpf(0), abs(mpf(w_full.count - w_poly.count)), strict=False)
    return report


def _winding_of(evaluator, q: QParam, contour: Contour, floor, precision) -> WindingResult:
    """Winding engine applied to any certified evaluator f(q, z, eps, prec)."""
    floor_m = mpf(floor)
    return _adaptive_winding(
        lambda z: evaluator(q, z, floor_m / 100, precision),
        contour,
        floor_m,
    )
