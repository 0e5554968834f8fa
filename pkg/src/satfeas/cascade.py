"""Admissibility cascade and the governance-gated rebalance filter.

A sleeve proposal passes through five layers in a fixed order: domain
eligibility, structural sizing, epistemic breadth, economic action
resolution, and physical impact validation. The cascade either synthesizes
a design (sizing the sleeve from the policy inputs and taking the first K
eligible candidates in input order, since no predictive ranking exists) or
validates a supplied one. It is a single-pass checker: when a bound is
violated the report says so and suggests remediation, it never searches.

Margins. Each layer verdict carries a native-unit margin and a normalized
margin (bound - usage) / bound so layers with different units compare:

* domain -- usage is the eligible-name count against the candidate pool;
* structural -- sleeve size against min(loss budget, policy cap);
* epistemic -- constituent count against the entropy breadth bound;
* economic -- the tighter of the breadth bound and the smallest
  constituent weight against the trade-size threshold;
* physical -- the tightest per-asset weight cap (impact, and participation
  when configured).

The binding layer is the first failing layer in cascade order, or among
passing layers the smallest normalized margin; exact ties resolve in the
order economic, structural, epistemic, physical, domain, matching the
binding regime typical of small portfolios.

Synthesized designs re-validate to the same verdicts: evaluation is a pure
function of (candidates, parameters, design).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .layers import (
    alpha_max_structural,
    breadth_bound_econ,
    breadth_bound_entropy,
    entropy_increment_approx,
    entropy_increment_exact,
    impact_cost,
    max_weight_impact,
    max_weight_participation,
    min_weight_change,
)
from .model import (
    LAYERS,
    UNBOUNDED,
    Asset,
    DerivedBounds,
    FeasibilityParams,
    FeasibilityReport,
    LayerVerdict,
    Portfolio,
    RebalanceProposal,
    SatelliteDesign,
    Unbounded,
    ValidationError,
)
from .tiering import assign_tier_weights, eligibility_filter

REASON_GOVERNANCE = "governance_gate"
REASON_RESOLUTION = "below_action_resolution"
REASON_IMPACT = "impact_cap"

#: Tie-break priority for equal normalized margins.
_TIE_ORDER = ("economic", "structural", "epistemic", "physical", "domain")

_TOL = 1e-12


def _fmt(x: float) -> str:
    return format(x, ".10g")


@dataclass(frozen=True)
class CascadeInput:
    """Everything one cascade evaluation needs.

    When ``design`` is absent the cascade synthesizes one; ``core_weights``
    (a normalized core composition) is optional and only feeds the exact
    entropy-increment diagnostic.
    """

    candidates: tuple[Asset, ...]
    params: FeasibilityParams
    kappa_a: float = 1.0
    kappa_c: float = 1.0
    theme: str = "unspecified"
    design: SatelliteDesign | None = None
    core_weights: tuple[float, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "candidates", tuple(self.candidates))
        seen: set[str] = set()
        for a in self.candidates:
            if not isinstance(a, Asset):
                raise ValidationError("candidates must be Asset instances",
                                      code="bad_candidate", field="candidates")
            if a.id in seen:
                raise ValidationError(f"duplicate candidate id {a.id!r}",
                                      code="duplicate_id", field="candidates")
            seen.add(a.id)
        if not self.kappa_a >= 1:
            raise ValidationError("kappa_a must be >= 1", code="kappa_a_out_of_range",
                                  field="kappa_a")
        if not 0 < self.kappa_c <= 1:
            raise ValidationError("kappa_c must lie in (0,1]", code="kappa_c_out_of_range",
                                  field="kappa_c")
        if self.design is not None and not isinstance(self.design, SatelliteDesign):
            raise ValidationError("design must be a SatelliteDesign", code="bad_design",
                                  field="design")
        if self.core_weights is not None:
            object.__setattr__(self, "core_weights", tuple(self.core_weights))


def compute_bounds(params: FeasibilityParams,
                   candidates: Sequence[Asset] | None = None) -> DerivedBounds:
    """Closed-form design bounds from the policy inputs.

    Breadth bounds are evaluated at the effective sleeve size, so the result
    is reproducible from the parameters alone; per-asset caps are attached
    when candidates are supplied.
    """
    a_struct = alpha_max_structural(params.structural)
    a_eff = min(params.structural.alpha_policy_max, a_struct)
    caps_impact = None
    caps_part = None
    if candidates is not None:
        caps_impact = {a.id: max_weight_impact(a, params) for a in candidates}
        if params.impact.participation_cap is not None:
            caps_part = {a.id: max_weight_participation(a, params) for a in candidates}
    return DerivedBounds(
        alpha_max_structural=a_struct,
        alpha_effective=a_eff,
        delta_w_min=min_weight_change(params.econ),
        k_max_econ=breadth_bound_econ(a_eff, params.econ),
        k_max_entropy=breadth_bound_entropy(a_eff, params.entropy),
        weight_caps_impact=caps_impact,
        weight_caps_participation=caps_part,
    )


def run_cascade(inp: CascadeInput) -> tuple[FeasibilityReport, SatelliteDesign]:
    """Evaluate (or synthesize) a sleeve design through all five layers.

    Synthesis sets the sleeve size to min(policy cap, loss budget), breadth
    to the tightest of the entropy bound, the economic bound, and the
    eligible-candidate count, then applies the tier weighting rule. A
    supplied design is validated against the same bounds instead; its
    weights are taken as given (feasibility is checked, weighting style is
    not). If nothing feasible can be built, the returned design is an empty
    sleeve and the report attributes the failure.
    """
    params = inp.params
    eligible, _rejected = eligibility_filter(inp.candidates)
    by_id = {a.id: a for a in inp.candidates}
    bounds = compute_bounds(params, inp.candidates)
    alpha_cap = bounds.alpha_effective

    notes: list[str] = []
    pol_min = params.structural.alpha_policy_min
    if alpha_cap < pol_min - _TOL:
        notes.append(f"alpha_effective {_fmt(alpha_cap)} falls below "
                     f"alpha_policy_min {_fmt(pol_min)}")

    if inp.design is not None:
        design = inp.design
        unknown = [name for name in design.ids if name not in by_id]
        if unknown:
            raise ValidationError(f"design references unknown asset id {unknown[0]!r}",
                                  code="unknown_asset_id", field="design")
        alpha_eval = design.alpha
        members = [(by_id[name], w) for name, w in design.constituents]
        ineligible = [(asset, reason) for (asset, _w), reason in zip(members, _reasons(members))
                      if reason is not None]
    else:
        alpha_eval = alpha_cap
        k_limit = len(eligible)
        for b in (bounds.k_max_entropy, bounds.k_max_econ):
            if not isinstance(b, Unbounded):
                k_limit = min(k_limit, b)
        if eligible and alpha_eval > 0 and k_limit >= 1:
            chosen = eligible[:k_limit]
            weighted = assign_tier_weights(alpha_eval, chosen, inp.kappa_a, inp.kappa_c)
            design = SatelliteDesign(theme=inp.theme, alpha=alpha_eval,
                                     constituents=tuple(weighted),
                                     kappa_a=inp.kappa_a, kappa_c=inp.kappa_c)
            members = list(zip(chosen, (w for _, w in weighted)))
        else:
            design = SatelliteDesign(theme=inp.theme, alpha=0.0, constituents=(),
                                     kappa_a=inp.kappa_a, kappa_c=inp.kappa_c)
            members = []
        ineligible = []

    verdicts = {
        "domain": _domain_verdict(len(inp.candidates), len(eligible), ineligible,
                                  validating=inp.design is not None,
                                  n_members=len(members)),
        "structural": _structural_verdict(alpha_eval, alpha_cap, params),
        "epistemic": _epistemic_verdict(alpha_eval, members, params, inp.core_weights),
        "economic": _economic_verdict(alpha_eval, members, params),
        "physical": _physical_verdict(members, params),
    }
    binding = _binding_layer(verdicts)
    report = FeasibilityReport(
        admissible=all(v.passed for v in verdicts.values()),
        layer_verdicts=verdicts,
        derived_bounds=bounds,
        binding_layer=binding,
        notes=tuple(notes),
    )
    return report, design


def _reasons(members: Sequence[tuple[Asset, float]]):
    from .model import ExclusionCategory

    for asset, _w in members:
        if not asset.gaer_admissible:
            yield "gaer_inadmissible"
        elif asset.exclusion is not ExclusionCategory.NONE:
            yield asset.exclusion.value
        else:
            yield None


def _domain_verdict(n_candidates: int, n_eligible: int,
                    ineligible: list[tuple[Asset, str]], validating: bool,
                    n_members: int) -> LayerVerdict:
    if validating and ineligible:
        asset, reason = ineligible[0]
        n_bad = len(ineligible)
        return LayerVerdict(
            passed=False,
            margin=float(-n_bad),
            normalized_margin=-n_bad / max(n_members, 1),
            bound=float(n_candidates), usage=float(n_eligible),
            detail=f"{n_bad} ineligible constituent(s); first: {asset.id} ({reason})",
        )
    passed = n_eligible >= 1 if not validating else True
    denom = max(n_candidates, 1)
    return LayerVerdict(
        passed=passed,
        margin=float(n_eligible - 1),
        normalized_margin=(n_eligible - 1) / denom if n_candidates else -1.0,
        bound=float(n_candidates), usage=float(n_eligible),
        detail=f"eligible {n_eligible} of {n_candidates} candidates",
    )


def _structural_verdict(alpha: float, alpha_cap: float,
                        params: FeasibilityParams) -> LayerVerdict:
    margin = alpha_cap - alpha
    if alpha_cap > 0:
        normalized = margin / alpha_cap
    else:
        normalized = 0.0 if alpha == 0 else -1.0
    if alpha == 0:
        detail = "empty sleeve (alpha = 0)"
        passed = False
    elif alpha > alpha_cap + _TOL:
        detail = f"alpha {_fmt(alpha)} exceeds cap {_fmt(alpha_cap)}"
        passed = False
    else:
        a_struct = alpha_max_structural(params.structural)
        if a_struct <= params.structural.alpha_policy_max:
            detail = f"loss budget caps alpha at {_fmt(alpha_cap)}"
        else:
            detail = f"policy caps alpha at {_fmt(alpha_cap)}"
        passed = True
    return LayerVerdict(passed=passed, margin=margin + 0.0,
                        normalized_margin=normalized + 0.0,
                        bound=alpha_cap, usage=alpha, detail=detail)


def _breadth_submargin(k: int, bound: int) -> tuple[bool, float, float]:
    """(passed, native margin, normalized margin) for a count-vs-bound check.

    With no names yet (k == 0) the layer must still be able to host one.
    """
    need = max(k, 1)
    native = float(bound - need)
    if bound > 0:
        return need <= bound, native, native / bound
    return False, native, -1.0


def _epistemic_verdict(alpha: float, members: Sequence[tuple[Asset, float]],
                       params: FeasibilityParams,
                       core_weights: tuple[float, ...] | None) -> LayerVerdict:
    k = len(members)
    if alpha <= 0:
        return LayerVerdict(passed=True, margin=None, normalized_margin=None,
                            bound=0.0, usage=0.0, detail="empty sleeve")
    bound = breadth_bound_entropy(alpha, params.entropy)
    passed, native, normalized = _breadth_submargin(k, bound)
    detail = f"breadth {k} against entropy bound {bound}"
    if k >= 1:
        approx = entropy_increment_approx(alpha, k)
        detail += f"; increment approx {_fmt(approx)}"
        if core_weights is not None and alpha < 1:
            exact = entropy_increment_exact(core_weights, alpha, k)
            detail += f", exact {_fmt(exact)}"
    return LayerVerdict(passed=passed, margin=native, normalized_margin=normalized,
                        bound=float(bound), usage=float(k), detail=detail)


def _economic_verdict(alpha: float, members: Sequence[tuple[Asset, float]],
                      params: FeasibilityParams) -> LayerVerdict:
    k = len(members)
    if alpha <= 0:
        return LayerVerdict(passed=True, margin=None, normalized_margin=None,
                            bound=None, usage=0.0, detail="empty sleeve")
    bound = breadth_bound_econ(alpha, params.econ)
    if isinstance(bound, Unbounded):
        passed_b, native_b, norm_b = True, None, None
        detail = f"breadth {k}, unbounded (zero trade threshold)"
    else:
        passed_b, native_b, norm_b = _breadth_submargin(k, bound)
        detail = f"breadth {k} against economic bound {bound}"

    passed_w, native_w, norm_w, w_detail = True, None, None, None
    eps = params.econ.min_effect_bps
    for asset, w in members:
        crt = asset.round_trip_cost_bps
        if crt is None:
            crt = params.econ.round_trip_cost_bps
        if crt > 0:
            dw_min = eps / crt
        elif eps == 0:
            dw_min = 0.0
        else:
            # zero-cost override with a positive effect threshold: no weight
            # clears it; report the whole position as below resolution
            dw_min = math.inf
        if w > 0:
            norm = (w - dw_min) / w if math.isfinite(dw_min) else -1.0
        else:
            norm = 0.0 if dw_min == 0 else -1.0
        native = w - dw_min if math.isfinite(dw_min) else -w
        if norm_w is None or norm < norm_w:
            norm_w, native_w = norm, native
            w_detail = f"smallest weight margin on {asset.id} (dw_min {_fmt(dw_min)})"
        if not w + _TOL >= dw_min:
            passed_w = False

    candidates = [(n, m) for n, m in ((norm_b, native_b), (norm_w, native_w))
                  if n is not None]
    if not candidates:
        normalized, native = None, None
    else:
        normalized, native = min(candidates, key=lambda t: t[0])
        if (norm_w, native_w) == (normalized, native) and w_detail is not None:
            detail += f"; {w_detail}"
    return LayerVerdict(passed=passed_b and passed_w, margin=native,
                        normalized_margin=normalized,
                        bound=bound if not isinstance(bound, Unbounded) else UNBOUNDED,
                        usage=float(k), detail=detail)


def _physical_verdict(members: Sequence[tuple[Asset, float]],
                      params: FeasibilityParams) -> LayerVerdict:
    if not members:
        return LayerVerdict(passed=True, margin=None, normalized_margin=None,
                            bound=None, usage=None, detail="empty sleeve")
    use_participation = params.impact.participation_cap is not None
    passed = True
    worst: tuple[float, float, float, str] | None = None  # (norm, cap, weight, id)
    for asset, w in members:
        cap = max_weight_impact(asset, params)
        if use_participation:
            cap = min(cap, max_weight_participation(asset, params))
        norm = (cap - w) / cap
        if worst is None or norm < worst[0]:
            worst = (norm, cap, w, asset.id)
        if w > cap + _TOL:
            passed = False
    norm, cap, weight, worst_id = worst
    detail = f"tightest cap {_fmt(cap)} on {worst_id}"
    if not passed:
        detail += "; remediation: reduce sleeve size, trim breadth, or swap in more liquid names"
    return LayerVerdict(passed=passed, margin=cap - weight + 0.0,
                        normalized_margin=norm + 0.0,
                        bound=cap, usage=weight, detail=detail)


def _binding_layer(verdicts: Mapping[str, LayerVerdict]) -> str:
    for name in LAYERS:
        if not verdicts[name].passed:
            return name
    best_name: str | None = None
    best: float | None = None
    for name in _TIE_ORDER:
        m = verdicts[name].normalized_margin
        if m is None:
            continue
        if best is None or m < best - _TOL:
            best, best_name = m, name
    return best_name if best_name is not None else "structural"


def filter_rebalance(
    proposal: RebalanceProposal,
    params: FeasibilityParams,
    assets: Iterable[Asset] | Mapping[str, Asset],
    current: Portfolio | None = None,
) -> tuple[list[tuple[str, float]], list[tuple[tuple[str, float], str]]]:
    """Partition proposed trades into executed and suppressed-with-reason.

    With no governance window open (neither the schedule due nor a declared
    structural break) every trade is suppressed as ``governance_gate``.
    Otherwise each trade must clear the cost-dominance threshold (using the
    asset's round-trip-cost override when present) and then the impact cap
    at the traded notional ``A * |dw|``. Executed and suppressed trades
    together are exactly the input, in order.

    Asset records must cover every traded id, current holdings included;
    ``current`` is accepted for contract completeness but the per-trade
    checks depend only on the trade, the parameters, and the asset record.
    """
    if isinstance(assets, Mapping):
        by_id = dict(assets)
    else:
        by_id = {a.id: a for a in assets}
    for name, _dw in proposal.trades:
        if name not in by_id:
            raise ValidationError(f"unknown asset id {name!r} in proposal",
                                  code="unknown_asset_id", field="trades")

    executed: list[tuple[str, float]] = []
    suppressed: list[tuple[tuple[str, float], str]] = []
    window_open = proposal.schedule_due or proposal.structural_break
    eps = params.econ.min_effect_bps
    for name, dw in proposal.trades:
        if not window_open:
            suppressed.append(((name, dw), REASON_GOVERNANCE))
            continue
        asset = by_id[name]
        crt = asset.round_trip_cost_bps
        if crt is None:
            crt = params.econ.round_trip_cost_bps
        ok_econ = abs(dw) >= eps / crt if crt > 0 else eps == 0
        if not ok_econ:
            suppressed.append(((name, dw), REASON_RESOLUTION))
            continue
        impact = impact_cost(params.aum_usd * abs(dw), asset.adv_usd, params.impact)
        if impact > params.impact.impact_cap:
            suppressed.append(((name, dw), REASON_IMPACT))
            continue
        executed.append((name, dw))
    return executed, suppressed
