"""Deterministic rendering of verification reports, classifications, and
numeric residual panels.

Output is plain text: titled sections, provenance footnotes, then a flat
machine-readable key=value block after a ``---`` separator.  Equal inputs
render to byte-equal output.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .hauptmodul import Classification
from .modeq import VerificationReport
from .numeric import KappaSelection, ResidualPanel
from .qseries import format_exponent


@dataclass(frozen=True)
class RenderedReport:
    sections: tuple[tuple[str, str], ...]
    footnotes: tuple[str, ...]
    machine: tuple[tuple[str, str], ...]

    def text(self) -> str:
        blocks = []
        for title, body in self.sections:
            blocks.append(f"== {title} ==\n{body}".rstrip())
        if self.footnotes:
            notes = "\n".join(f"[{i}] {note}" for i, note in enumerate(self.footnotes, 1))
            blocks.append(notes)
        body = "\n\n".join(blocks)
        machine = "\n".join(f"{k}={v}" for k, v in self.machine)
        return f"{body}\n---\n{machine}\n"


def _fmt_exponent(value) -> str:
    return format_exponent(Fraction(value))


def _verification_body(rep: VerificationReport) -> str:
    lines = []
    if rep.status == "consistent":
        lines.append(f"CONSISTENT to q^{_fmt_exponent(rep.verified_to)}")
    elif rep.status == "inconsistent":
        e, expected, actual = rep.first_failure
        lines.append(f"INCONSISTENT at q^{_fmt_exponent(e)}")
        lines.append(f"  expected {expected.literal()}")
        lines.append(f"  actual   {actual.literal()}")
    else:
        lines.append("INSUFFICIENT DATA")
        lines.append(f"  determined only through q^{_fmt_exponent(rep.verified_to)};"
                     " supply a deeper expansion")
    return "\n".join(lines)


def _verification_machine(rep: VerificationReport) -> list[tuple[str, str]]:
    pairs = [
        ("order", str(rep.order)),
        ("status", rep.status),
        ("verified_to", _fmt_exponent(rep.verified_to)),
    ]
    if rep.first_failure is not None:
        e, expected, actual = rep.first_failure
        pairs.append(("failure_exponent", _fmt_exponent(e)))
        pairs.append(("failure_expected", expected.literal()))
        pairs.append(("failure_actual", actual.literal()))
    return pairs


def _classification_sections(c: Classification):
    lines = [f"verdict: {c.verdict}"]
    if c.fiction_xi is not None:
        xi = c.fiction_xi
        if xi.is_zero():
            shape = "q^{-1}"
        elif xi == 1:
            shape = "q^{-1}+q"
        elif xi == -1:
            shape = "q^{-1}-q"
        else:
            shape = f"q^{{-1}}+({xi.literal()})q"
        lines.append(f"modular fiction: {shape}")
    sections = [("classification", "\n".join(lines))]
    for m, rep in c.orders_tested:
        sections.append((f"order {m}", _verification_body(rep)))
    if c.notes:
        sections.append(("notes", c.notes))
    return sections


def _classification_machine(c: Classification) -> list[tuple[str, str]]:
    orders = ",".join(str(m) for m, _ in c.orders_tested)
    verified = [rep.verified_to for _, rep in c.orders_tested]
    pairs = [
        ("verdict", c.verdict),
        ("xi", c.fiction_xi.literal() if c.fiction_xi is not None else "none"),
        ("orders", orders),
        ("verified_to", _fmt_exponent(min(verified)) if verified else ""),
    ]
    for m, rep in c.orders_tested:
        pairs.append((f"order_{m}_status", rep.status))
    return pairs


def _panel_sections(panel: ResidualPanel):
    width = max((len(r.label) for r in panel.rows), default=0)
    lines = []
    for row in panel.rows:
        verdict = "pass" if row.passed else "FAIL"
        lines.append(f"{row.label.ljust(width)}  residual {row.residual:.3e}"
                     f"  (tolerance {row.tolerance:.1e})  {verdict}")
    if panel.notes:
        lines.append(panel.notes)
    return [(panel.title, "\n".join(lines))]


def _panel_machine(panel: ResidualPanel) -> list[tuple[str, str]]:
    pairs: list[tuple[str, str]] = [("rows", str(len(panel.rows)))]
    for i, row in enumerate(panel.rows, 1):
        pairs.append((f"label_{i}", row.label))
        pairs.append((f"residual_{i}", f"{row.residual:.6e}"))
        pairs.append((f"pass_{i}", "true" if row.passed else "false"))
    return pairs


def render(obj, footnotes: tuple[str, ...] = ()) -> RenderedReport:
    """Render a report-like object; extra provenance strings become
    footnotes."""
    if isinstance(obj, VerificationReport):
        return RenderedReport(
            sections=((f"order-{obj.order} modular equation", _verification_body(obj)),),
            footnotes=tuple(footnotes),
            machine=tuple(_verification_machine(obj)),
        )
    if isinstance(obj, Classification):
        return RenderedReport(
            sections=tuple(_classification_sections(obj)),
            footnotes=tuple(footnotes),
            machine=tuple(_classification_machine(obj)),
        )
    if isinstance(obj, KappaSelection):
        machine = _panel_machine(obj.panel)
        machine.append(("winner", str(obj.winner) if obj.winner is not None else "none"))
        return RenderedReport(
            sections=tuple(_panel_sections(obj.panel)),
            footnotes=tuple(footnotes),
            machine=tuple(machine),
        )
    if isinstance(obj, ResidualPanel):
        return RenderedReport(
            sections=tuple(_panel_sections(obj)),
            footnotes=tuple(footnotes),
            machine=tuple(_panel_machine(obj)),
        )
    raise TypeError(f"cannot render {type(obj).__name__}")


def provenance_footnotes(entry) -> tuple[str, ...]:
    """Human-readable provenance strings for a corpus entry."""
    notes = []
    for r in entry.provenance:
        span = f"q^{r.lo}..q^{r.hi}"
        if r.kind == "published":
            notes.append(f"{span}: published reference expansion")
        elif r.kind == "derived":
            notes.append(f"{span}: derived({r.oracle})")
        else:
            notes.append(f"{span}: external input, unverified provenance")
    return tuple(notes)
