"""Report containers shared by the certificate and zero-finding layers."""

from __future__ import annotations

from dataclasses import dataclass, field

from mpmath import mp, mpf


@dataclass(frozen=True)
class Inequality:
    """One checked inequality: claim is ``lhs > rhs`` (or >= when strict=False).

    ``informational`` rows record reference values that do not gate the
    certificate (e.g. reproductions of printed constants known to carry
    transcription slips); they are reported but excluded from ``passed``.
    """

    label: str
    lhs: mpf
    rhs: mpf
    strict: bool = True
    informational: bool = False
    note: str = ""

    @property
    def margin(self) -> mpf:
        return self.lhs - self.rhs

    @property
    def passed(self) -> bool:
        return self.margin > 0 if self.strict else self.margin >= 0


@dataclass
class CertificateReport:
    """Named intermediate quantities plus a list of checked inequalities."""

    lemma_id: str
    inputs: dict = field(default_factory=dict)
    quantities: dict = field(default_factory=dict)
    inequalities: list[Inequality] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.inequalities if not r.informational)

    def check(self, label, lhs, rhs, strict=True, informational=False, note="") -> Inequality:
        row = Inequality(
            label=label, lhs=mpf(lhs), rhs=mpf(rhs), strict=strict,
            informational=informational, note=note,
        )
        self.inequalities.append(row)
        return row

    def failing(self) -> list[Inequality]:
        return [r for r in self.inequalities if not r.informational and not r.passed]

    def summary(self) -> str:
        state = "pass" if self.passed else "FAIL"
        return f"[{state}] {self.lemma_id}: {len(self.inequalities)} inequalities"


def fmt_mpf(x, digits: int = 17) -> str:
    """Deterministic decimal rendering used by all report emitters."""
    return mp.nstr(mpf(x), digits, strip_zeros=True)
