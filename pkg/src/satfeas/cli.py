"""Command-line surface for the feasibility engine.

Subcommands mirror the operating procedure: ``bounds`` prints the
closed-form design bounds from a config alone, ``design`` synthesizes and
evaluates a sleeve, ``check`` validates a supplied design, and
``filter-rebalance`` / ``replay`` drive the governance-gated trade filter.
Exit codes: 0 success (and admissible for check/design), 2 inadmissible,
1 any error. Reports go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from .cascade import CascadeInput, compute_bounds, filter_rebalance, run_cascade
from .config import RunConfig, load_config
from .io import (
    emit_report,
    load_candidates,
    load_core_weights,
    load_events,
    load_proposal_trades,
)
from .model import (
    Portfolio,
    RebalanceProposal,
    SatelliteDesign,
    ValidationError,
)
from .replay import replay


class _Parser(argparse.ArgumentParser):
    """argparse that exits 1 on usage errors instead of 2."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(1)


def _build_parser() -> _Parser:
    parser = _Parser(prog="satfeas",
                     description="Feasibility gating for thematic satellite sleeves")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add_common(p, candidates=True):
        p.add_argument("--config", required=True, help="JSON config file")
        if candidates:
            p.add_argument("--candidates", help="candidate universe CSV "
                                                "(overrides the config path)")
        p.add_argument("--format", choices=("json", "text"), default="text",
                       help="output format (default: text)")

    p_bounds = sub.add_parser("bounds", help="print closed-form design bounds")
    add_common(p_bounds)

    p_design = sub.add_parser("design", help="synthesize a sleeve and evaluate it")
    add_common(p_design)
    p_design.add_argument("--core-weights", help="normalized core CSV for the exact "
                                                 "entropy diagnostic")

    p_check = sub.add_parser("check", help="evaluate a supplied sleeve design")
    add_common(p_check)
    p_check.add_argument("--design", required=True, help="design JSON file")
    p_check.add_argument("--core-weights", help="normalized core CSV for the exact "
                                                "entropy diagnostic")

    p_filter = sub.add_parser("filter-rebalance", help="apply the trade filter to a proposal")
    add_common(p_filter)
    p_filter.add_argument("--proposal", required=True, help="proposal CSV (id,delta_w)")
    p_filter.add_argument("--schedule-due", action="store_true",
                          help="the scheduled rebalance window is open")
    p_filter.add_argument("--structural-break", action="store_true",
                          help="a governance structural break was declared")

    p_replay = sub.add_parser("replay", help="replay a dated event stream")
    add_common(p_replay)
    p_replay.add_argument("--events", required=True,
                          help="event CSV (date,id,delta_w,schedule_due,structural_break)")
    p_replay.add_argument("--design", help="design JSON for the initial sleeve "
                                           "(default: synthesize)")
    p_replay.add_argument("--core-weights", help="normalized core CSV for initial weights")
    return parser


def _load_universe(cfg: RunConfig, args) -> list:
    path = getattr(args, "candidates", None) or cfg.candidates_path
    if path is None:
        raise ValidationError("no candidates file given (use --candidates or the "
                              "'candidates' config key)", code="candidates_missing",
                              field="candidates")
    return load_candidates(path)


def _load_core(cfg: RunConfig, args) -> list[tuple[str, float]] | None:
    path = getattr(args, "core_weights", None) or cfg.core_weights_path
    if path is None:
        return None
    return load_core_weights(path)


def _emit(data: bytes) -> None:
    sys.stdout.buffer.write(data)
    sys.stdout.buffer.flush()


def _cmd_bounds(args) -> int:
    cfg = load_config(args.config)
    candidates = None
    path = getattr(args, "candidates", None) or cfg.candidates_path
    if path is not None:
        candidates = load_candidates(path)
    bounds = compute_bounds(cfg.params, candidates)
    if args.format == "json":
        _emit((json.dumps(bounds.to_dict(), sort_keys=True, indent=2) + "\n").encode())
    else:
        lines = ["derived bounds", "--------------"]
        d = bounds.to_dict()
        for key in ("alpha_max_structural", "alpha_effective", "delta_w_min",
                    "k_max_econ", "k_max_entropy"):
            value = d[key]
            text = format(value, ".10g") if isinstance(value, float) else str(value)
            lines.append(f"{key:<22}{text}")
        if bounds.weight_caps_impact is not None:
            lines.append("")
            lines.append("per-asset impact caps")
            for name in sorted(bounds.weight_caps_impact):
                lines.append(f"{name:<22}{format(bounds.weight_caps_impact[name], '.10g')}")
        _emit(("\n".join(lines) + "\n").encode())
    return 0


def _run_and_emit(cfg: RunConfig, candidates, fmt: str,
                  design: SatelliteDesign | None, core) -> int:
    core_weights = tuple(w for _, w in core) if core is not None else None
    report, out_design = run_cascade(CascadeInput(
        candidates=tuple(candidates), params=cfg.params, kappa_a=cfg.kappa_a,
        kappa_c=cfg.kappa_c, theme=cfg.theme, design=design, core_weights=core_weights))
    _emit(emit_report(report, out_design, fmt))
    return 0 if report.admissible else 2


def _cmd_design(args) -> int:
    cfg = load_config(args.config)
    return _run_and_emit(cfg, _load_universe(cfg, args), args.format, None,
                         _load_core(cfg, args))


def _cmd_check(args) -> int:
    cfg = load_config(args.config)
    with open(args.design, encoding="utf-8") as fh:
        design = SatelliteDesign.from_dict(json.load(fh))
    return _run_and_emit(cfg, _load_universe(cfg, args), args.format, design,
                         _load_core(cfg, args))


def _cmd_filter(args) -> int:
    cfg = load_config(args.config)
    assets = _load_universe(cfg, args)
    trades = load_proposal_trades(args.proposal)
    proposal = RebalanceProposal(trades=tuple(trades), schedule_due=args.schedule_due,
                                 structural_break=args.structural_break)
    executed, suppressed = filter_rebalance(proposal, cfg.params, assets)
    if args.format == "json":
        doc = {"executed": [[n, dw] for n, dw in executed],
               "suppressed": [[n, dw, reason] for (n, dw), reason in suppressed]}
        _emit((json.dumps(doc, sort_keys=True, indent=2) + "\n").encode())
    else:
        lines = [f"executed {len(executed)} of {len(proposal.trades)} trades"]
        for name, dw in executed:
            lines.append(f"  execute   {name:<12}{format(dw, '+.10g')}")
        for (name, dw), reason in suppressed:
            lines.append(f"  suppress  {name:<12}{format(dw, '+.10g')}  ({reason})")
        _emit(("\n".join(lines) + "\n").encode())
    return 0


def _cmd_replay(args) -> int:
    cfg = load_config(args.config)
    assets = _load_universe(cfg, args)
    events = load_events(args.events)
    core = _load_core(cfg, args)
    if args.design is not None:
        with open(args.design, encoding="utf-8") as fh:
            design = SatelliteDesign.from_dict(json.load(fh))
    else:
        core_weights = tuple(w for _, w in core) if core is not None else None
        _report, design = run_cascade(CascadeInput(
            candidates=tuple(assets), params=cfg.params, kappa_a=cfg.kappa_a,
            kappa_c=cfg.kappa_c, theme=cfg.theme, core_weights=core_weights))
    remainder = 1.0 - design.alpha
    if core is not None:
        core_pairs = tuple((name, w * remainder) for name, w in core)
    else:
        core_pairs = (("CORE", remainder),) if remainder > 0 else ()
    portfolio = Portfolio(core_weights=core_pairs, satellite=design)
    stats = replay(events, cfg.params, portfolio, assets)
    if args.format == "json":
        _emit((json.dumps(stats.to_dict(), sort_keys=True, indent=2) + "\n").encode())
    else:
        d = stats.to_dict()
        lines = ["replay statistics", "-----------------"]
        for key in ("events_total", "trades_proposed", "trades_executed"):
            lines.append(f"{key:<28}{d[key]}")
        for reason, count in d["trades_suppressed_by_reason"].items():
            lines.append(f"suppressed[{reason}]".ljust(28) + str(count))
        lines.append(f"{'gross_turnover_executed':<28}{format(d['gross_turnover_executed'], '.10g')}")
        lines.append(f"{'max_participation_observed':<28}"
                     f"{format(d['max_participation_observed'], '.10g')}")
        _emit(("\n".join(lines) + "\n").encode())
    return 0


_COMMANDS = {
    "bounds": _cmd_bounds,
    "design": _cmd_design,
    "check": _cmd_check,
    "filter-rebalance": _cmd_filter,
    "replay": _cmd_replay,
}


def main(argv: Sequence[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except ValidationError as e:
        print(f"error: {e.args[0]}", file=sys.stderr)
        return 1
    except (OSError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
