"""End-to-end containment check: all zeros of theta(q, .) lie in

    {Re z < 0, |Im z| <= 132}  union  {Re z >= 0, |z| <= 18}.

For each base q the bounded plane is split into the domain itself (no check
needed), exterior tiles inside a margin box (scanned by the argument
principle, any zero found there is a violation), and the unbounded
remainder (covered by the inequality certificates, whose hypothesis regions
contain it).  The scan also produces an informational census of the zeros
inside the domain: the rightmost real zeros and, where the census is cheap,
the located conjugate pairs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from mpmath import mp, mpc, mpf

from .certificates import (
    QTILDE_1,
    certify_part1,
    certify_part2_K,
    certify_part2_L,
    certify_small_q,
    interval_index,
)
from .reports import CertificateReport
from .series import DEFAULT_PRECISION, Precision, QParam, as_qparam, theta_eval
from .zeros import (
    Contour,
    ZeroFinderError,
    ZeroRecord,
    find_zeros,
    winding_count,
)

__all__ = [
    "DEFAULT_MARGIN_BOX",
    "ScanReport",
    "TheoremDomain",
    "count_conjugate_pairs",
    "domain_membership",
    "scan_q_grid",
    "verify_theorem_at",
]


@dataclass(frozen=True)
class TheoremDomain:
    """The containment region: half-strip for Re z < 0, half-disk for Re z >= 0."""

    strip_height: float = 132.0
    half_disk_radius: float = 18.0

    def membership(self, z) -> bool:
        zc = mpc(z)
        if zc.real < 0:
            return abs(zc.imag) <= self.strip_height
        return abs(zc) <= self.half_disk_radius


DOMAIN = TheoremDomain()

#: (x_left, x_right, y_bottom, y_top); strictly contains the domain's
#: bounded directions
DEFAULT_MARGIN_BOX = (-400.0, 25.0, -150.0, 150.0)

#: pair census is skipped above this base (the pair population grows like
#: pi/(2(1-q)) and individual location stops being worth the time)
PAIR_CENSUS_MAX_Q = 0.96
PAIR_LOCATE_LIMIT = 8
PAIR_BOX = (-32.0, 17.9, 0.02, 30.0)


def domain_membership(z) -> bool:
    """Exact containment predicate, boundary included."""
    return DOMAIN.membership(z)


@dataclass
class ScanReport:
    q_values: list = field(default_factory=list)
    zeros: list = field(default_factory=list)
    violations: list = field(default_factory=list)
    certificates: list = field(default_factory=list)
    pair_counts: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)
    errors: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return (
            not self.violations
            and not self.errors
            and all(c.passed for c in self.certificates)
        )

    def merge(self, other: "ScanReport") -> None:
        self.q_values.extend(other.q_values)
        self.zeros.extend(other.zeros)
        self.violations.extend(other.violations)
        self.certificates.extend(other.certificates)
        self.pair_counts.update(other.pair_counts)
        self.notes.extend(other.notes)
        self.errors.extend(other.errors)


def _exterior_tiles(box) -> list[Contour]:
    """Cover of (margin box) minus (domain) by scannable contours.

    Requires x_right > 18 and y_top > 132.  The right side uses a half
    annulus from the half-disk boundary out to a radius that dominates the
    rectangle corners, plus two rectangles above and below; the left side
    uses the two strips beyond the half-strip height.  Tiles overlap each
    other and may poke into the domain; located zeros are classified
    individually, so overlap is harmless.
    """
    x0, x1, y0, y1 = box
    if not (x1 > 18 and y1 > 132 and y0 < -132):
        raise ValueError("margin box must strictly contain the domain's bounded part")
    y_c = x1 + 2.0
    r_a = math.hypot(x1, y_c) + 0.5
    eps = 1e-3
    return [
        Contour.half_annulus(18.0, r_a),
        Contour.rectangle(-eps, x1, y_c - 1.0, y1),
        Contour.rectangle(-eps, x1, y0, -(y_c - 1.0)),
        Contour.rectangle(x0, eps, 132.0, y1),
        Contour.rectangle(x0, eps, y0, -132.0),
    ]


def count_conjugate_pairs(
    q,
    precision: Precision = DEFAULT_PRECISION,
    box: tuple = PAIR_BOX,
) -> int:
    """Number of conjugate pairs of zeros: zeros with Im z above a small
    sill, counted by one winding over the upper-half window that contains
    every pair for moderate q."""
    w = winding_count(q, Contour.rectangle(*box), precision=precision)
    return w.count


def _rightmost_real_zeros(
    q: QParam,
    depth: float = 40.0,
    limit: int = 12,
    precision: Precision = DEFAULT_PRECISION,
) -> list[ZeroRecord]:
    """Sign-change scan of theta(q, x) on [-depth, 0), rightmost first."""
    eps = mpf("1e-25")
    zeros: list[ZeroRecord] = []
    qf = float(q.q)
    # multiplicative grid finer than the ~1/q zero spacing
    step = min(1 + (1 / qf - 1) / 6, 1.2)
    x = -1e-3
    prev_x, prev_sign = None, None
    while x > -depth and len(zeros) < limit:
        v = theta_eval(q, mpf(x), eps, precision)
        if abs(v.value) > v.err:
            sign = 1 if v.value > 0 else -1
            if prev_sign is not None and sign != prev_sign:
                lo, hi = x, prev_x
                for _ in range(80):
                    mid = (lo + hi) / 2
                    vm = theta_eval(q, mpf(mid), eps, precision)
                    if abs(vm.value) <= vm.err:
                        break
                    if (1 if vm.value > 0 else -1) == sign:
                        lo = mid
                    else:
                        hi = mid
                root = mpf((lo + hi) / 2)
                res = theta_eval(q, root, eps, precision)
                zeros.append(
                    ZeroRecord(q=q, z=mpc(root), residual=abs(res.value) + res.err,
                               refined=True)
                )
            prev_x, prev_sign = x, sign
        x *= step if x < -0.5 else 1.0
        if x >= -0.5:
            x -= 0.05
    return zeros


def _certificates_for(q: QParam, precision: Precision) -> tuple[list[CertificateReport], list[str]]:
    notes: list[str] = []
    reports: list[CertificateReport] = []
    qf = float(q.q)
    if qf <= float(mpf(QTILDE_1)):
        notes.append(
            f"q = {qf:.6g} is at or below the first spectral base: every zero is "
            "real negative (established structure), so the exterior needs no "
            "inequality certificate; the scan result stands on its own"
        )
        return reports, notes
    iv = interval_index(q)
    reports.append(certify_part1(iv.n, precision=precision))
    if qf <= 0.5:
        reports.append(certify_small_q(132, precision=precision))
    else:
        hi = max(40, iv.n)
        reports.append(certify_part2_K(132, (3, hi), precision=precision))
        reports.append(certify_part2_L(132, (3, hi), precision=precision))
    notes.append(
        "exterior coverage: the right tiles and half annulus lie in "
        "{Re z >= 0, |z| >= 18} (part1 hypothesis), the high strips lie in "
        "{Re z < 0, |Im z| >= 132} (part2/smallq hypothesis); the unbounded "
        "remainder lies in the same two hypothesis regions"
    )
    return reports, notes


def verify_theorem_at(
    q,
    margin_box: tuple = DEFAULT_MARGIN_BOX,
    tol: float = 1e-10,
    precision: Precision = DEFAULT_PRECISION,
) -> ScanReport:
    """Scan one base: locate zeros in the exterior tiles (violations),
    census the in-domain zeros, and attach the exterior certificates."""
    qp = as_qparam(q)
    report = ScanReport(q_values=[qp.q])
    qf = float(qp.q)

    for tile in _exterior_tiles(margin_box):
        try:
            w = winding_count(qp, tile, precision=precision)
            if w.count == 0:
                continue
            # a candidate violation: locate it (rare path; any zero in an
            # exterior tile that fails membership is a violation)
            for rec in find_zeros(qp, tile, tol=tol, precision=precision):
                if domain_membership(rec.z):
                    report.zeros.append(rec)
                else:
                    report.violations.append(rec)
        except ZeroFinderError as exc:
            report.errors.append(
                f"q={qf:.6g} tile {tile.kind} {tuple(map(float, tile.params))}: {exc}"
            )

    certs, notes = _certificates_for(qp, precision)
    report.certificates.extend(certs)
    report.notes.extend(notes)

    # informational census inside the domain
    try:
        report.zeros.extend(_rightmost_real_zeros(qp, precision=precision))
    except (ZeroFinderError, ArithmeticError) as exc:
        report.notes.append(f"q={qf:.6g}: real-zero census skipped ({exc})")
    if qf <= PAIR_CENSUS_MAX_Q:
        try:
            n_pairs = count_conjugate_pairs(qp, precision=precision)
            report.pair_counts[float(qp.q)] = n_pairs
            if 0 < n_pairs <= PAIR_LOCATE_LIMIT:
                pairs = find_zeros(qp, Contour.rectangle(*PAIR_BOX), tol=tol,
                                   precision=precision)
                for rec in pairs:
                    report.zeros.append(rec)
                    report.zeros.append(rec.conjugate())
                    if not domain_membership(rec.z):
                        report.violations.append(rec)
        except ZeroFinderError as exc:
            report.notes.append(f"q={qf:.6g}: pair census skipped ({exc})")
    else:
        report.notes.append(
            f"q={qf:.6g}: pair census skipped (dense regime, about "
            f"{int(math.pi / (2 * (1 - qf)))} pairs); exterior tiles and "
            "certificates still cover the containment claim"
        )
    return report


def scan_q_grid(
    grid,
    tol: float = 1e-10,
    margin_box: tuple = DEFAULT_MARGIN_BOX,
    precision: Precision = DEFAULT_PRECISION,
) -> ScanReport:
    """Union of per-base scans; per-base failures are collected, not fatal."""
    grid = list(grid)
    if not grid:
        raise ValueError("empty grid")
    merged = ScanReport()
    for qv in grid:
        try:
            merged.merge(verify_theorem_at(qv, margin_box=margin_box, tol=tol,
                                           precision=precision))
        except (ZeroFinderError, ArithmeticError, ValueError) as exc:
            merged.q_values.append(mpf(qv))
            merged.errors.append(f"q={float(qv):.6g}: {exc}")
    return merged
