"""Deterministic replay of dated rebalance proposals through the trade filter.

Each event runs the governance-gated filter; executed trades update the
satellite weights with an offsetting implicit cash bucket in the core, so
total portfolio weight is conserved. There are no price dynamics: weights
move only when trades execute. Replays over the same inputs produce
identical statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from datetime import date
from typing import Any, Iterable, Iterator, Mapping, Sequence

from .cascade import filter_rebalance
from .model import Asset, FeasibilityParams, Portfolio, RebalanceProposal, ValidationError


@dataclass(frozen=True)
class RebalanceEvent:
    """One dated rebalance proposal; streams must be strictly date-increasing."""

    date: date
    proposal: RebalanceProposal

    def __post_init__(self):
        if not isinstance(self.date, date):
            raise ValidationError("event date must be a datetime.date",
                                  code="bad_date", field="date")
        if not isinstance(self.proposal, RebalanceProposal):
            raise ValidationError("event proposal must be a RebalanceProposal",
                                  code="bad_proposal", field="proposal")


@dataclass(frozen=True)
class ReplayStats:
    """Aggregate turnover-suppression statistics over an event stream."""

    events_total: int
    trades_proposed: int
    trades_executed: int
    trades_suppressed_by_reason: dict[str, int]
    gross_turnover_executed: float
    max_participation_observed: float

    def __post_init__(self):
        suppressed = sum(self.trades_suppressed_by_reason.values())
        if self.trades_executed + suppressed != self.trades_proposed:
            raise ValidationError(
                "executed plus suppressed trade counts must equal proposed",
                code="stats_inconsistent", field="trades_proposed")

    def to_dict(self) -> dict[str, Any]:
        return {
            "events_total": self.events_total,
            "trades_proposed": self.trades_proposed,
            "trades_executed": self.trades_executed,
            "trades_suppressed_by_reason": dict(sorted(
                self.trades_suppressed_by_reason.items())),
            "gross_turnover_executed": self.gross_turnover_executed,
            "max_participation_observed": self.max_participation_observed,
        }


@dataclass(frozen=True)
class ReplayStep:
    """State after one event: what ran, what was suppressed, and the weight sum."""

    event: RebalanceEvent
    executed: tuple[tuple[str, float], ...]
    suppressed: tuple[tuple[tuple[str, float], str], ...]
    total_weight: float


def replay_steps(
    events: Sequence[RebalanceEvent],
    params: FeasibilityParams,
    initial: Portfolio,
    assets: Iterable[Asset] | Mapping[str, Asset],
) -> Iterator[ReplayStep]:
    """Drive the filter event by event, yielding per-event outcomes.

    Satellite weights are updated with executed trades only; the offsetting
    cash adjustment keeps the total portfolio weight at one.
    """
    if isinstance(assets, Mapping):
        by_id = dict(assets)
    else:
        by_id = {a.id: a for a in assets}
    previous: date | None = None
    sat = {name: w for name, w in initial.satellite.constituents}
    core_total = math.fsum(w for _, w in initial.core_weights)
    cash = 0.0
    for event in events:
        if previous is not None and event.date <= previous:
            raise ValidationError(
                f"events must be strictly increasing by date ({event.date} after {previous})",
                code="events_out_of_order", field="events")
        previous = event.date
        executed, suppressed = filter_rebalance(event.proposal, params, by_id)
        for name, dw in executed:
            sat[name] = sat.get(name, 0.0) + dw
            cash -= dw
        total = core_total + cash + math.fsum(sat.values())
        yield ReplayStep(event=event, executed=tuple(executed),
                         suppressed=tuple(suppressed), total_weight=total)


def replay(
    events: Sequence[RebalanceEvent],
    params: FeasibilityParams,
    initial: Portfolio,
    assets: Iterable[Asset] | Mapping[str, Asset],
) -> ReplayStats:
    """Aggregate an event stream into suppression statistics."""
    if isinstance(assets, Mapping):
        by_id = dict(assets)
    else:
        by_id = {a.id: a for a in assets}
    proposed = 0
    executed_n = 0
    by_reason: dict[str, int] = {}
    turnover = 0.0
    max_participation = 0.0
    for step in replay_steps(events, params, initial, by_id):
        proposed += len(step.event.proposal.trades)
        executed_n += len(step.executed)
        for _trade, reason in step.suppressed:
            by_reason[reason] = by_reason.get(reason, 0) + 1
        turnover += math.fsum(abs(dw) for _, dw in step.executed)
        for name, dw in step.executed:
            participation = params.aum_usd * abs(dw) / by_id[name].adv_usd
            max_participation = max(max_participation, participation)
    return ReplayStats(
        events_total=len(events),
        trades_proposed=proposed,
        trades_executed=executed_n,
        trades_suppressed_by_reason=by_reason,
        gross_turnover_executed=turnover,
        max_participation_observed=max_participation,
    )
