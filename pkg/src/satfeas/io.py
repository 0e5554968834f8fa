"""File formats: candidate/proposal/event CSVs and report emission.

All CSV schemas are strict (exact headers, row-numbered errors); reports
serialize to stable-key-ordered JSON that round-trips, or to a fixed-width
text table with layer rows in cascade order.
"""

from __future__ import annotations

import csv
import io as _io
import json
from datetime import date
from pathlib import Path
from typing import Any, Sequence

from .model import (
    LAYERS,
    Asset,
    ExclusionCategory,
    FeasibilityReport,
    RebalanceProposal,
    SatelliteDesign,
    TierClass,
    Unbounded,
    ValidationError,
)
from .replay import RebalanceEvent

CANDIDATE_HEADER = ["id", "tier", "adv_usd", "round_trip_cost_bps",
                    "gaer_admissible", "exclusion"]
PROPOSAL_HEADER = ["id", "delta_w"]
EVENT_HEADER = ["date", "id", "delta_w", "schedule_due", "structural_break"]
CORE_HEADER = ["id", "weight"]


def _read_rows(path: str | Path, header: list[str], what: str) -> list[dict[str, str]]:
    p = Path(path)
    if not p.is_file():
        raise ValidationError(f"{what} file not found: {p}", code="file_missing", field=what)
    with p.open(newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            got = next(reader)
        except StopIteration:
            raise ValidationError(f"{what} file {p} is empty", code="bad_header",
                                  field=what) from None
        if [h.strip() for h in got] != header:
            raise ValidationError(
                f"{what} file {p} must have header {','.join(header)!r}, got {','.join(got)!r}",
                code="bad_header", field=what)
        rows = []
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            if len(row) != len(header):
                raise ValidationError(f"{what} row {lineno} has {len(row)} fields, "
                                      f"expected {len(header)}", code="bad_row", field=what)
            rows.append({"_line": str(lineno), **dict(zip(header, (c.strip() for c in row)))})
        return rows


def _parse_float(text: str, what: str, line: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ValidationError(f"{what} row {line}: {text!r} is not a number",
                              code="bad_number", field=what) from None


def _parse_bool(text: str, what: str, line: str) -> bool:
    lowered = text.lower()
    if lowered == "true":
        return True
    if lowered == "false":
        return False
    raise ValidationError(f"{what} row {line}: expected true or false, got {text!r}",
                          code="bad_boolean", field=what)


def load_candidates(path: str | Path) -> list[Asset]:
    """Read the candidate universe CSV, one validated asset per row.

    An empty ``round_trip_cost_bps`` cell means the sleeve-level cost
    applies. Errors carry the offending row number.
    """
    assets: list[Asset] = []
    seen: set[str] = set()
    for row in _read_rows(path, CANDIDATE_HEADER, "candidates"):
        line = row["_line"]
        if row["id"] in seen:
            raise ValidationError(f"candidates row {line}: duplicate id {row['id']!r}",
                                  code="duplicate_id", field="candidates")
        seen.add(row["id"])
        override = None
        if row["round_trip_cost_bps"]:
            override = _parse_float(row["round_trip_cost_bps"], "candidates", line)
        try:
            asset = Asset(
                id=row["id"],
                tier=TierClass.parse(row["tier"]),
                adv_usd=_parse_float(row["adv_usd"], "candidates", line),
                gaer_admissible=_parse_bool(row["gaer_admissible"], "candidates", line),
                exclusion=ExclusionCategory.parse(row["exclusion"]),
                round_trip_cost_bps=override,
            )
        except ValidationError as e:
            raise ValidationError(f"candidates row {line}: {e.args[0]}",
                                  code=e.code, field=e.field) from None
        assets.append(asset)
    return assets


def dump_candidates(assets: Sequence[Asset]) -> str:
    """Write assets back to the candidate CSV format (round-trip safe)."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CANDIDATE_HEADER)
    for a in assets:
        override = "" if a.round_trip_cost_bps is None else repr(a.round_trip_cost_bps)
        writer.writerow([a.id, a.tier.value, repr(a.adv_usd), override,
                         "true" if a.gaer_admissible else "false", a.exclusion.value])
    return buf.getvalue()


def load_core_weights(path: str | Path) -> list[tuple[str, float]]:
    """Read a core composition CSV, normalized to sum to one within 1e-9."""
    import math

    out: list[tuple[str, float]] = []
    seen: set[str] = set()
    for row in _read_rows(path, CORE_HEADER, "core_weights"):
        line = row["_line"]
        if row["id"] in seen:
            raise ValidationError(f"core_weights row {line}: duplicate id {row['id']!r}",
                                  code="duplicate_id", field="core_weights")
        seen.add(row["id"])
        w = _parse_float(row["weight"], "core_weights", line)
        if w < 0:
            raise ValidationError(f"core_weights row {line}: weight must be nonnegative",
                                  code="weight_must_be_nonnegative", field="core_weights")
        out.append((row["id"], w))
    total = math.fsum(w for _, w in out)
    if abs(total - 1.0) > 1e-9:
        raise ValidationError(f"core weights sum to {total!r}, expected 1.0",
                              code="weights_not_normalized", field="core_weights")
    return out


def load_proposal_trades(path: str | Path) -> list[tuple[str, float]]:
    """Read a rebalance proposal CSV of per-asset weight changes."""
    out: list[tuple[str, float]] = []
    seen: set[str] = set()
    for row in _read_rows(path, PROPOSAL_HEADER, "proposal"):
        line = row["_line"]
        if row["id"] in seen:
            raise ValidationError(f"proposal row {line}: duplicate id {row['id']!r}",
                                  code="duplicate_id", field="proposal")
        seen.add(row["id"])
        out.append((row["id"], _parse_float(row["delta_w"], "proposal", line)))
    return out


def load_events(path: str | Path) -> list[RebalanceEvent]:
    """Read an event-stream CSV, grouping consecutive rows by date.

    Governance flags must agree within a date group; dates must be strictly
    increasing across groups.
    """
    rows = _read_rows(path, EVENT_HEADER, "events")
    events: list[RebalanceEvent] = []
    group: list[dict[str, str]] = []

    def flush(group_rows: list[dict[str, str]]) -> None:
        if not group_rows:
            return
        first = group_rows[0]
        line = first["_line"]
        try:
            day = date.fromisoformat(first["date"])
        except ValueError:
            raise ValidationError(f"events row {line}: bad date {first['date']!r}",
                                  code="bad_date", field="events") from None
        schedule_due = _parse_bool(first["schedule_due"], "events", line)
        structural_break = _parse_bool(first["structural_break"], "events", line)
        trades = []
        for row in group_rows:
            rline = row["_line"]
            if (_parse_bool(row["schedule_due"], "events", rline) != schedule_due
                    or _parse_bool(row["structural_break"], "events", rline) != structural_break):
                raise ValidationError(
                    f"events row {rline}: governance flags differ within date {first['date']}",
                    code="inconsistent_flags", field="events")
            trades.append((row["id"], _parse_float(row["delta_w"], "events", rline)))
        proposal = RebalanceProposal(trades=tuple(trades), schedule_due=schedule_due,
                                     structural_break=structural_break)
        if events and day <= events[-1].date:
            raise ValidationError(f"events row {line}: dates must be strictly increasing",
                                  code="events_out_of_order", field="events")
        events.append(RebalanceEvent(date=day, proposal=proposal))

    for row in rows:
        if group and row["date"] != group[0]["date"]:
            flush(group)
            group = []
        group.append(row)
    flush(group)
    return events


def emit_report(report: FeasibilityReport, design: SatelliteDesign,
                fmt: str = "text") -> bytes:
    """Render a report plus its design as stable JSON or a fixed-width table."""
    if fmt == "json":
        doc = {"design": design.to_dict(), "report": report.to_dict()}
        return (json.dumps(doc, sort_keys=True, indent=2) + "\n").encode("utf-8")
    if fmt == "text":
        return _render_text(report, design).encode("utf-8")
    raise ValidationError(f"unknown report format {fmt!r}", code="bad_format", field="format")


def parse_report(data: bytes | str) -> tuple[FeasibilityReport, SatelliteDesign]:
    """Inverse of :func:`emit_report` for the JSON format."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    doc = json.loads(data)
    return FeasibilityReport.from_dict(doc["report"]), SatelliteDesign.from_dict(doc["design"])


def _cell(value: Any) -> str:
    if value is None:
        return "-"
    if isinstance(value, Unbounded):
        return "unbounded"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return format(value, ".10g")
    return str(value)


def _table(headers: list[str], rows: list[list[str]]) -> list[str]:
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in rows:
        lines.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    return lines


def _render_text(report: FeasibilityReport, design: SatelliteDesign) -> str:
    lines = ["satellite feasibility report",
             "============================",
             f"theme:          {design.theme}",
             f"admissible:     {_cell(report.admissible)}",
             f"binding layer:  {report.binding_layer}",
             ""]
    rows = []
    for name in LAYERS:
        v = report.layer_verdicts[name]
        rows.append([name, "pass" if v.passed else "FAIL", _cell(v.margin),
                     _cell(v.normalized_margin), _cell(v.bound), _cell(v.usage),
                     v.detail or "-"])
    lines += _table(["layer", "verdict", "margin", "normalized", "bound", "usage", "detail"],
                    rows)

    b = report.derived_bounds
    lines += ["", "derived bounds", "--------------"]
    for key, value in (("alpha_max_structural", b.alpha_max_structural),
                       ("alpha_effective", b.alpha_effective),
                       ("delta_w_min", b.delta_w_min),
                       ("k_max_econ", b.k_max_econ),
                       ("k_max_entropy", b.k_max_entropy)):
        lines.append(f"{key:<22}{_cell(value)}")

    if b.weight_caps_impact is not None:
        cap_rows = []
        for name in sorted(b.weight_caps_impact):
            part = (b.weight_caps_participation or {}).get(name)
            cap_rows.append([name, _cell(b.weight_caps_impact[name]), _cell(part)])
        lines += ["", "per-asset weight caps", "---------------------"]
        lines += _table(["id", "impact", "participation"], cap_rows)

    lines += ["", "design",
              "------",
              f"alpha: {_cell(design.alpha)}  kappa_a: {_cell(design.kappa_a)}  "
              f"kappa_c: {_cell(design.kappa_c)}"]
    if design.constituents:
        lines += _table(["id", "weight"],
                        [[name, _cell(w)] for name, w in design.constituents])
    else:
        lines.append("(empty sleeve)")

    if report.notes:
        lines += ["", "notes", "-----"]
        lines += [f"- {note}" for note in report.notes]
    return "\n".join(lines) + "\n"
