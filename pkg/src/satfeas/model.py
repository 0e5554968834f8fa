"""Domain types for satellite-sleeve feasibility evaluation.

Every type validates its invariants at construction time and is frozen
afterwards, so instances are safe to share across concurrent evaluators.
Constructors raise :class:`ValidationError` naming the offending field.

All weights are fractions of total portfolio value; cost-like quantities
carry a ``_bps`` suffix (1 bp = 1e-4 as a fraction) and are converted at
most once, inside the operation that mixes them with fractions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, fields
from enum import Enum
from typing import Any, Iterable, Mapping

#: Absolute tolerance for equality-style weight invariants. All formulas in
#: the engine are closed-form, so nothing looser is justified.
WEIGHT_TOL = 1e-12

#: Feasibility layers in cascade evaluation order.
LAYERS = ("domain", "structural", "epistemic", "economic", "physical")


class ValidationError(ValueError):
    """An input violated a declared invariant.

    ``code`` is a stable machine-readable identifier; ``field`` names the
    offending input when one can be singled out.
    """

    def __init__(self, message: str, code: str | None = None, field: str | None = None):
        super().__init__(message)
        self.code = code
        self.field = field


class Unbounded:
    """Sentinel for a breadth bound that imposes no limit.

    Returned instead of a fake large number when a zero trade threshold
    makes the economic breadth bound vacuous.
    """

    _instance: "Unbounded | None" = None

    def __new__(cls) -> "Unbounded":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "unbounded"


UNBOUNDED = Unbounded()


def _require(cond: bool, message: str, code: str, field_name: str) -> None:
    if not cond:
        raise ValidationError(message, code=code, field=field_name)


def _finite(x: float, name: str) -> None:
    _require(isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x),
             f"{name} must be a finite number", "not_finite", name)


class TierClass(str, Enum):
    """Economic role of a constituent along the thematic value chain."""

    A = "A"  # hard constraints and bottlenecks
    B = "B"  # platforms and rent extractors
    C = "C"  # embedded adopters

    @classmethod
    def parse(cls, text: str) -> "TierClass":
        try:
            return cls(text.strip().upper())
        except ValueError:
            raise ValidationError(
                f"tier must be one of A, B, C (got {text!r})", "bad_tier", "tier"
            ) from None


class ExclusionCategory(str, Enum):
    """Asset categories barred from sleeve eligibility by design."""

    PURE_PLAY_EARLY_STAGE = "pure_play_early_stage"
    SMALL_CAP_SPECIALIST = "small_cap_specialist"
    REGIME_OPAQUE_JURISDICTION = "regime_opaque_jurisdiction"
    THEMATIC_ETF = "thematic_etf"
    NONE = "none"

    @classmethod
    def parse(cls, text: str) -> "ExclusionCategory":
        try:
            return cls(text.strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValidationError(
                f"exclusion must be one of {valid} (got {text!r})", "bad_exclusion", "exclusion"
            ) from None


@dataclass(frozen=True)
class Asset:
    """One candidate sleeve constituent with liquidity and admissibility data.

    ``round_trip_cost_bps`` optionally overrides the sleeve-level round-trip
    friction for this asset; ``None`` means use the sleeve value.
    """

    id: str
    tier: TierClass
    adv_usd: float
    gaer_admissible: bool
    exclusion: ExclusionCategory = ExclusionCategory.NONE
    round_trip_cost_bps: float | None = None

    def __post_init__(self):
        _require(isinstance(self.id, str) and self.id != "", "id must be a nonempty string",
                 "bad_id", "id")
        _require(isinstance(self.tier, TierClass), "tier must be a TierClass", "bad_tier", "tier")
        _finite(self.adv_usd, "adv_usd")
        _require(self.adv_usd > 0, "adv_usd must be positive", "adv_must_be_positive", "adv_usd")
        _require(isinstance(self.gaer_admissible, bool), "gaer_admissible must be a boolean",
                 "bad_flag", "gaer_admissible")
        _require(isinstance(self.exclusion, ExclusionCategory), "exclusion must be an ExclusionCategory",
                 "bad_exclusion", "exclusion")
        if self.round_trip_cost_bps is not None:
            _finite(self.round_trip_cost_bps, "round_trip_cost_bps")
            _require(self.round_trip_cost_bps >= 0,
                     "round_trip_cost_bps must be nonnegative when present",
                     "cost_must_be_nonnegative", "round_trip_cost_bps")

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "tier": self.tier.value,
            "adv_usd": self.adv_usd,
            "round_trip_cost_bps": self.round_trip_cost_bps,
            "gaer_admissible": self.gaer_admissible,
            "exclusion": self.exclusion.value,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Asset":
        d = _strict_keys(data, {"id", "tier", "adv_usd", "round_trip_cost_bps",
                                "gaer_admissible", "exclusion"}, set(), "asset")
        return cls(
            id=d["id"],
            tier=TierClass.parse(d["tier"]),
            adv_usd=d["adv_usd"],
            gaer_admissible=d["gaer_admissible"],
            exclusion=ExclusionCategory.parse(d["exclusion"]),
            round_trip_cost_bps=d["round_trip_cost_bps"],
        )


@dataclass(frozen=True)
class ImpactParams:
    """Concave market-impact law parameters, in fractional-return units."""

    c: float
    delta: float
    impact_cap: float
    participation_cap: float | None = None

    def __post_init__(self):
        _finite(self.c, "c")
        _require(self.c > 0, "c must be positive", "c_must_be_positive", "c")
        _finite(self.delta, "delta")
        _require(0 < self.delta < 1, "delta must lie in (0,1)", "delta_out_of_range", "delta")
        _finite(self.impact_cap, "impact_cap")
        _require(self.impact_cap > 0, "impact_cap must be positive",
                 "impact_cap_must_be_positive", "impact_cap")
        if self.participation_cap is not None:
            _finite(self.participation_cap, "participation_cap")
            _require(0 < self.participation_cap <= 1,
                     "participation_cap must lie in (0,1] when present",
                     "participation_cap_out_of_range", "participation_cap")

    def to_dict(self) -> dict[str, Any]:
        d: dict[str, Any] = {"c": self.c, "delta": self.delta, "impact_cap": self.impact_cap}
        if self.participation_cap is not None:
            d["participation_cap"] = self.participation_cap
        return d


@dataclass(frozen=True)
class EconParams:
    """Cost-dominance threshold inputs: round-trip friction and minimum effect."""

    round_trip_cost_bps: float
    min_effect_bps: float = 0.0

    def __post_init__(self):
        _finite(self.round_trip_cost_bps, "round_trip_cost_bps")
        _require(self.round_trip_cost_bps > 0, "round_trip_cost_bps must be positive",
                 "cost_must_be_positive", "round_trip_cost_bps")
        _finite(self.min_effect_bps, "min_effect_bps")
        _require(self.min_effect_bps >= 0, "min_effect_bps must be nonnegative",
                 "effect_must_be_nonnegative", "min_effect_bps")

    def to_dict(self) -> dict[str, Any]:
        return {"round_trip_cost_bps": self.round_trip_cost_bps,
                "min_effect_bps": self.min_effect_bps}


@dataclass(frozen=True)
class StructuralParams:
    """Optionality budget: tolerable loss, failure drawdown, and policy caps."""

    loss_tolerance: float
    max_drawdown: float
    alpha_policy_min: float = 0.0
    alpha_policy_max: float = 1.0

    def __post_init__(self):
        _finite(self.loss_tolerance, "loss_tolerance")
        _require(0 <= self.loss_tolerance <= 1, "loss_tolerance must lie in [0,1]",
                 "loss_tolerance_out_of_range", "loss_tolerance")
        _finite(self.max_drawdown, "max_drawdown")
        _require(0 < self.max_drawdown <= 1, "max_drawdown must lie in (0,1]",
                 "max_drawdown_out_of_range", "max_drawdown")
        _finite(self.alpha_policy_min, "alpha_policy_min")
        _finite(self.alpha_policy_max, "alpha_policy_max")
        _require(0 <= self.alpha_policy_min <= self.alpha_policy_max <= 1,
                 "alpha policy range must satisfy 0 <= alpha_policy_min <= alpha_policy_max <= 1",
                 "alpha_policy_out_of_range", "alpha_policy_min")

    def to_dict(self) -> dict[str, Any]:
        return {"loss_tolerance": self.loss_tolerance, "max_drawdown": self.max_drawdown,
                "alpha_policy_min": self.alpha_policy_min, "alpha_policy_max": self.alpha_policy_max}


@dataclass(frozen=True)
class EntropyParams:
    """Complexity budget: allowed portfolio weight-entropy increment, in nats."""

    delta_h_max: float

    def __post_init__(self):
        _finite(self.delta_h_max, "delta_h_max")
        _require(self.delta_h_max >= 0, "delta_h_max must be nonnegative",
                 "entropy_budget_must_be_nonnegative", "delta_h_max")

    def to_dict(self) -> dict[str, Any]:
        return {"delta_h_max": self.delta_h_max}


@dataclass(frozen=True)
class FeasibilityParams:
    """All policy inputs of the four feasibility layers plus portfolio scale.

    ``turnover_fraction`` is the per-rebalance turnover envelope applied
    uniformly; asset-level round-trip-cost overrides live on :class:`Asset`.
    """

    aum_usd: float
    turnover_fraction: float
    impact: ImpactParams
    econ: EconParams
    structural: StructuralParams
    entropy: EntropyParams

    def __post_init__(self):
        _finite(self.aum_usd, "aum_usd")
        _require(self.aum_usd > 0, "aum_usd must be positive", "aum_must_be_positive", "aum_usd")
        _finite(self.turnover_fraction, "turnover_fraction")
        _require(0 < self.turnover_fraction <= 1, "turnover_fraction must lie in (0,1]",
                 "turnover_out_of_range", "turnover_fraction")
        for name, typ in (("impact", ImpactParams), ("econ", EconParams),
                          ("structural", StructuralParams), ("entropy", EntropyParams)):
            _require(isinstance(getattr(self, name), typ),
                     f"{name} must be a {typ.__name__}", "bad_section", name)

    def to_dict(self) -> dict[str, Any]:
        return {
            "aum_usd": self.aum_usd,
            "turnover_fraction": self.turnover_fraction,
            "impact": self.impact.to_dict(),
            "econ": self.econ.to_dict(),
            "structural": self.structural.to_dict(),
            "entropy": self.entropy.to_dict(),
        }


def _check_weight_pairs(pairs: Iterable[tuple[str, float]], what: str) -> tuple[tuple[str, float], ...]:
    out = []
    seen = set()
    for item in pairs:
        try:
            name, w = item
        except (TypeError, ValueError):
            raise ValidationError(f"{what} entries must be (id, weight) pairs",
                                  "bad_weight_pair", what) from None
        _require(isinstance(name, str) and name != "", f"{what} ids must be nonempty strings",
                 "bad_id", what)
        _finite(w, f"{what} weight for {name}")
        _require(w >= 0, f"{what} weight for {name} must be nonnegative",
                 "weight_must_be_nonnegative", what)
        _require(name not in seen, f"duplicate id {name!r} in {what}", "duplicate_id", what)
        seen.add(name)
        out.append((name, float(w)))
    return tuple(out)


@dataclass(frozen=True)
class SatelliteDesign:
    """A concrete proposed sleeve: size, constituents, and tier tilts."""

    theme: str
    alpha: float
    constituents: tuple[tuple[str, float], ...]
    kappa_a: float = 1.0
    kappa_c: float = 1.0

    def __post_init__(self):
        _require(isinstance(self.theme, str), "theme must be a string", "bad_theme", "theme")
        _finite(self.alpha, "alpha")
        _require(0 <= self.alpha <= 1, "alpha must lie in [0,1]", "alpha_out_of_range", "alpha")
        object.__setattr__(self, "constituents",
                           _check_weight_pairs(self.constituents, "constituents"))
        _finite(self.kappa_a, "kappa_a")
        _require(self.kappa_a >= 1, "kappa_a must be >= 1", "kappa_a_out_of_range", "kappa_a")
        _finite(self.kappa_c, "kappa_c")
        _require(0 < self.kappa_c <= 1, "kappa_c must lie in (0,1]", "kappa_c_out_of_range", "kappa_c")
        total = math.fsum(w for _, w in self.constituents)
        _require(abs(total - self.alpha) <= WEIGHT_TOL,
                 f"constituent weights sum to {total!r}, expected alpha={self.alpha!r}",
                 "weights_do_not_sum_to_alpha", "constituents")

    @property
    def ids(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.constituents)

    def to_dict(self) -> dict[str, Any]:
        return {
            "theme": self.theme,
            "alpha": self.alpha,
            "constituents": [[name, w] for name, w in self.constituents],
            "kappa_a": self.kappa_a,
            "kappa_c": self.kappa_c,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SatelliteDesign":
        d = _strict_keys(data, {"theme", "alpha", "constituents", "kappa_a", "kappa_c"},
                         set(), "design")
        return cls(theme=d["theme"], alpha=d["alpha"],
                   constituents=tuple((str(n), float(w)) for n, w in d["constituents"]),
                   kappa_a=d["kappa_a"], kappa_c=d["kappa_c"])


@dataclass(frozen=True)
class Portfolio:
    """Core weights plus a satellite design; total weights sum to one."""

    core_weights: tuple[tuple[str, float], ...]
    satellite: SatelliteDesign

    def __post_init__(self):
        object.__setattr__(self, "core_weights",
                           _check_weight_pairs(self.core_weights, "core_weights"))
        _require(isinstance(self.satellite, SatelliteDesign), "satellite must be a SatelliteDesign",
                 "bad_satellite", "satellite")
        total = math.fsum(w for _, w in self.core_weights) + \
            math.fsum(w for _, w in self.satellite.constituents)
        _require(abs(total - 1.0) <= WEIGHT_TOL,
                 f"portfolio weights sum to {total!r}, expected 1.0",
                 "weights_do_not_sum_to_one", "core_weights")

    def to_dict(self) -> dict[str, Any]:
        return {"core_weights": [[n, w] for n, w in self.core_weights],
                "satellite": self.satellite.to_dict()}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Portfolio":
        d = _strict_keys(data, {"core_weights", "satellite"}, set(), "portfolio")
        return cls(core_weights=tuple((str(n), float(w)) for n, w in d["core_weights"]),
                   satellite=SatelliteDesign.from_dict(d["satellite"]))


@dataclass(frozen=True)
class RebalanceProposal:
    """Per-asset weight changes plus the governance context they arrive in."""

    trades: tuple[tuple[str, float], ...]
    schedule_due: bool = False
    structural_break: bool = False

    def __post_init__(self):
        out = []
        seen = set()
        for item in self.trades:
            try:
                name, dw = item
            except (TypeError, ValueError):
                raise ValidationError("trades must be (id, delta_w) pairs",
                                      "bad_trade", "trades") from None
            _require(isinstance(name, str) and name != "", "trade ids must be nonempty strings",
                     "bad_id", "trades")
            _finite(dw, f"delta_w for {name}")
            _require(name not in seen, f"duplicate id {name!r} in trades", "duplicate_id", "trades")
            seen.add(name)
            out.append((name, float(dw)))
        object.__setattr__(self, "trades", tuple(out))
        _require(isinstance(self.schedule_due, bool), "schedule_due must be a boolean",
                 "bad_flag", "schedule_due")
        _require(isinstance(self.structural_break, bool), "structural_break must be a boolean",
                 "bad_flag", "structural_break")

    def to_dict(self) -> dict[str, Any]:
        return {"trades": [[n, dw] for n, dw in self.trades],
                "schedule_due": self.schedule_due,
                "structural_break": self.structural_break}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "RebalanceProposal":
        d = _strict_keys(data, {"trades", "schedule_due", "structural_break"}, set(), "proposal")
        return cls(trades=tuple((str(n), float(dw)) for n, dw in d["trades"]),
                   schedule_due=d["schedule_due"], structural_break=d["structural_break"])


@dataclass(frozen=True)
class LayerVerdict:
    """Pass/fail for one feasibility layer plus its distance to the boundary.

    ``margin`` is the signed distance to the constraint boundary in the
    layer's native units (names for breadth layers, weight fraction for
    sizing and caps). ``normalized_margin`` rescales it to (bound - usage)
    / bound so layers with different units can be compared; ``None`` marks
    a vacuous layer with nothing to measure.
    """

    passed: bool
    margin: float | None
    normalized_margin: float | None
    bound: float | Unbounded | None = None
    usage: float | None = None
    detail: str | None = None

    def to_dict(self) -> dict[str, Any]:
        bound: Any = self.bound
        if isinstance(bound, Unbounded):
            bound = "unbounded"
        return {"passed": self.passed, "margin": self.margin,
                "normalized_margin": self.normalized_margin,
                "bound": bound, "usage": self.usage, "detail": self.detail}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "LayerVerdict":
        d = _strict_keys(data, {"passed", "margin", "normalized_margin", "bound",
                                "usage", "detail"}, set(), "layer verdict")
        bound = d["bound"]
        if bound == "unbounded":
            bound = UNBOUNDED
        return cls(passed=d["passed"], margin=d["margin"],
                   normalized_margin=d["normalized_margin"], bound=bound,
                   usage=d["usage"], detail=d["detail"])


@dataclass(frozen=True)
class DerivedBounds:
    """Closed-form design bounds implied by the policy inputs alone.

    Breadth bounds are evaluated at the effective sleeve size; per-asset
    weight caps are present only when candidate data was supplied.
    """

    alpha_max_structural: float
    alpha_effective: float
    delta_w_min: float
    k_max_econ: int | Unbounded
    k_max_entropy: int
    weight_caps_impact: dict[str, float] | None = None
    weight_caps_participation: dict[str, float] | None = None

    def to_dict(self) -> dict[str, Any]:
        k_econ: Any = self.k_max_econ
        if isinstance(k_econ, Unbounded):
            k_econ = "unbounded"
        return {
            "alpha_max_structural": self.alpha_max_structural,
            "alpha_effective": self.alpha_effective,
            "delta_w_min": self.delta_w_min,
            "k_max_econ": k_econ,
            "k_max_entropy": self.k_max_entropy,
            "weight_caps_impact": self.weight_caps_impact,
            "weight_caps_participation": self.weight_caps_participation,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DerivedBounds":
        d = _strict_keys(data, {"alpha_max_structural", "alpha_effective", "delta_w_min",
                                "k_max_econ", "k_max_entropy", "weight_caps_impact",
                                "weight_caps_participation"}, set(), "derived bounds")
        k_econ = d["k_max_econ"]
        if k_econ == "unbounded":
            k_econ = UNBOUNDED
        return cls(alpha_max_structural=d["alpha_max_structural"],
                   alpha_effective=d["alpha_effective"], delta_w_min=d["delta_w_min"],
                   k_max_econ=k_econ, k_max_entropy=d["k_max_entropy"],
                   weight_caps_impact=d["weight_caps_impact"],
                   weight_caps_participation=d["weight_caps_participation"])


@dataclass(frozen=True)
class FeasibilityReport:
    """Per-layer verdicts, derived bounds, and binding-constraint attribution.

    ``admissible`` is true exactly when every layer verdict passed; the
    report is a pure function of the evaluation inputs.
    """

    admissible: bool
    layer_verdicts: dict[str, LayerVerdict]
    derived_bounds: DerivedBounds
    binding_layer: str
    notes: tuple[str, ...] = ()

    def __post_init__(self):
        _require(set(self.layer_verdicts) == set(LAYERS),
                 f"layer_verdicts must cover exactly {LAYERS}", "bad_layers", "layer_verdicts")
        _require(self.binding_layer in LAYERS, "binding_layer must name a layer",
                 "bad_binding_layer", "binding_layer")
        conj = all(v.passed for v in self.layer_verdicts.values())
        _require(self.admissible == conj,
                 "admissible must equal the conjunction of layer verdicts",
                 "admissibility_mismatch", "admissible")
        object.__setattr__(self, "notes", tuple(self.notes))

    def to_dict(self) -> dict[str, Any]:
        return {
            "admissible": self.admissible,
            "binding_layer": self.binding_layer,
            "derived_bounds": self.derived_bounds.to_dict(),
            "layers": {name: v.to_dict() for name, v in self.layer_verdicts.items()},
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "FeasibilityReport":
        d = _strict_keys(data, {"admissible", "binding_layer", "derived_bounds",
                                "layers", "notes"}, set(), "report")
        verdicts = {name: LayerVerdict.from_dict(v) for name, v in d["layers"].items()}
        ordered = {name: verdicts[name] for name in LAYERS if name in verdicts}
        ordered.update({k: v for k, v in verdicts.items() if k not in ordered})
        return cls(admissible=d["admissible"], layer_verdicts=ordered,
                   derived_bounds=DerivedBounds.from_dict(d["derived_bounds"]),
                   binding_layer=d["binding_layer"], notes=tuple(d["notes"]))


def _strict_keys(data: Mapping[str, Any], required: set[str], optional: set[str],
                 path: str) -> dict[str, Any]:
    """Reject unknown keys and report missing ones, returning a plain dict."""
    if not isinstance(data, Mapping):
        raise ValidationError(f"{path} must be an object", "not_an_object", path)
    unknown = sorted(set(data) - required - optional)
    if unknown:
        raise ValidationError(f"{path} has unknown key {unknown[0]!r}", "unknown_key",
                              f"{path}.{unknown[0]}")
    missing = sorted(required - set(data))
    if missing:
        raise ValidationError(f"{path} is missing key {missing[0]!r}", "missing_key",
                              f"{path}.{missing[0]}")
    return dict(data)
