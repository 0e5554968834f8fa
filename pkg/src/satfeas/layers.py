"""Closed-form feasibility bounds for satellite sleeves.

Four constraint families are covered, each as pure functions of validated
inputs:

* physical -- admissibility of trades under a concave impact law
  ``I = c * (Q/V)**delta`` and the per-asset weight caps it implies;
* economic -- the cost-dominance threshold ``dw_min = eps / C_rt`` and the
  breadth bound ``K <= alpha / dw_min`` it induces;
* structural -- the optionality budget ``alpha <= L / D_max``;
* epistemic -- the entropy increment of a sleeve and the breadth bound
  ``K <= alpha * exp(dH_max / alpha)``.

All functions are deterministic and free of shared state. Breadth bounds
return integers (a name count), corrected at floating-point boundaries so
that each bound is the exact integer inverse of its forward constraint.
"""

from __future__ import annotations

import math
from typing import Sequence

from .model import (
    UNBOUNDED,
    Asset,
    EconParams,
    EntropyParams,
    FeasibilityParams,
    StructuralParams,
    Unbounded,
    ValidationError,
)

#: Relative slack for the weight-sum precondition of entropy functions;
#: looser than WEIGHT_TOL because callers may pass externally sourced cores.
ENTROPY_SUM_TOL = 1e-9


def impact_cost(traded_notional_usd: float, adv_usd: float, params) -> float:
    """Fractional-return cost of trading ``Q`` dollars against ``V`` of ADV.

    Evaluates the concave law ``c * (Q/V)**delta``; zero trades cost zero.
    ``params`` only needs ``c`` and ``delta`` attributes (an ImpactParams).
    """
    if not (isinstance(adv_usd, (int, float)) and adv_usd > 0):
        raise ValidationError("adv_usd must be positive", code="adv_must_be_positive",
                              field="adv_usd")
    if traded_notional_usd < 0:
        raise ValidationError("traded notional must be nonnegative",
                              code="notional_must_be_nonnegative", field="traded_notional_usd")
    if traded_notional_usd == 0:
        return 0.0
    return params.c * (traded_notional_usd / adv_usd) ** params.delta


def max_weight_impact(asset: Asset, params: FeasibilityParams) -> float:
    """Largest portfolio weight whose envelope trade stays within the impact cap.

    Inverts the impact law at ``Q = A * w * tau``, giving
    ``w <= (V / (A * tau)) * (I_cap / c) ** (1/delta)``, clamped to [0, 1]
    because the raw formula can exceed one at small portfolio scale.
    """
    tau = params.turnover_fraction
    imp = params.impact
    raw = (asset.adv_usd / (params.aum_usd * tau)) * (imp.impact_cap / imp.c) ** (1.0 / imp.delta)
    return min(max(raw, 0.0), 1.0)


def max_weight_participation(asset: Asset, params: FeasibilityParams) -> float:
    """Weight cap implied by a participation limit ``Q/V <= phi``.

    Returns ``phi * V / (A * tau)`` clamped to [0, 1]. Requires a configured
    participation cap.
    """
    phi = params.impact.participation_cap
    if phi is None:
        raise ValidationError("participation cap is not configured",
                              code="participation_cap_not_configured",
                              field="impact.participation_cap")
    raw = phi * asset.adv_usd / (params.aum_usd * params.turnover_fraction)
    return min(max(raw, 0.0), 1.0)


def min_weight_change(econ: EconParams) -> float:
    """Smallest weight change whose portfolio effect clears round-trip friction.

    Basis points cancel in ``eps / C_rt``, so the result is a pure fraction
    of total portfolio value; zero when the effect threshold is zero.
    """
    return econ.min_effect_bps / econ.round_trip_cost_bps


def trade_admissible(delta_w: float, econ: EconParams) -> bool:
    """Whether a signed weight change clears the cost-dominance threshold.

    Symmetric in direction (sells pay the same round trip as buys), and
    admissible at exact equality with the threshold.
    """
    return abs(delta_w) >= min_weight_change(econ)


def breadth_bound_econ(alpha: float, econ: EconParams) -> int | Unbounded:
    """Most names a sleeve of size ``alpha`` can hold at full action resolution.

    Each active constituent must carry at least ``dw_min`` total-portfolio
    weight, so ``K <= alpha / dw_min``. Returns UNBOUNDED when the threshold
    is zero; otherwise the exact largest integer K with ``K * dw_min <= alpha``.
    """
    if not 0 <= alpha <= 1:
        raise ValidationError("alpha must lie in [0,1]", code="alpha_out_of_range", field="alpha")
    dw_min = min_weight_change(econ)
    if dw_min == 0:
        return UNBOUNDED
    k = int(math.floor(alpha / dw_min))
    # float-boundary correction: characterize the result multiplicatively
    if (k + 1) * dw_min <= alpha:
        k += 1
    elif k >= 1 and k * dw_min > alpha:
        k -= 1
    return k


def alpha_max_structural(structural: StructuralParams) -> float:
    """Largest sleeve size the optionality budget allows.

    From ``alpha * D_max <= L``: returns ``min(L / D_max, 1)``. Zero loss
    tolerance forbids any satellite.
    """
    return min(structural.loss_tolerance / structural.max_drawdown, 1.0)


def effective_alpha(structural: StructuralParams) -> float:
    """Sleeve size after applying both the policy cap and the loss budget.

    ``min(alpha_policy_max, alpha_max_structural)``. Callers that build
    reports flag the case where this falls below ``alpha_policy_min``.
    """
    return min(structural.alpha_policy_max, alpha_max_structural(structural))


def weight_entropy(weights: Sequence[float]) -> float:
    """Shannon entropy ``-sum(w * ln w)`` of a normalized weight vector, in nats.

    Zero weights contribute nothing (the ``0 * ln 0 = 0`` convention), so the
    function is continuous as any weight vanishes. Result lies in [0, ln N].
    """
    total = math.fsum(weights)
    if abs(total - 1.0) > ENTROPY_SUM_TOL:
        raise ValidationError(f"weights sum to {total!r}, expected 1.0",
                              code="weights_not_normalized", field="weights")
    for w in weights:
        if w < 0:
            raise ValidationError("weights must be nonnegative",
                                  code="weight_must_be_nonnegative", field="weights")
    return -math.fsum(w * math.log(w) for w in weights if w > 0) + 0.0


def entropy_increment_approx(alpha: float, k: int) -> float:
    """Entropy added by an equal-weight sleeve, ignoring core rescaling.

    ``-alpha * ln(alpha / K)`` for a sleeve of total weight ``alpha`` spread
    over ``K`` names. Exactly zero for the whole portfolio in one name.
    """
    if alpha == 0:
        raise ValidationError("an empty sleeve has no entropy increment; treat it as zero",
                              code="empty_sleeve_has_no_increment", field="alpha")
    if not 0 < alpha <= 1:
        raise ValidationError("alpha must lie in (0,1]", code="alpha_out_of_range", field="alpha")
    if not (isinstance(k, int) and k >= 1):
        raise ValidationError("k must be a positive integer", code="k_out_of_range", field="k")
    return -alpha * math.log(alpha / k) + 0.0


def entropy_increment_exact(core_weights: Sequence[float], alpha: float, k: int) -> float:
    """Exact entropy increment of adding an equal-weight sleeve to a known core.

    The total mixture assigns ``(1 - alpha) * c_j`` to each core name and
    ``alpha / K`` to each of ``K`` sleeve names; returns ``H(total) - H(core)``.
    Differs from the closed-form approximation by the dropped rescaling terms
    ``(1-alpha) * (-ln(1-alpha)) - alpha * H_core``.
    """
    if not 0 <= alpha < 1:
        raise ValidationError("alpha must lie in [0,1)", code="alpha_out_of_range", field="alpha")
    if not (isinstance(k, int) and k >= 1):
        raise ValidationError("k must be a positive integer", code="k_out_of_range", field="k")
    h_core = weight_entropy(core_weights)
    mixture = [(1.0 - alpha) * c for c in core_weights] + [alpha / k] * k
    return weight_entropy(mixture) - h_core


#: Practical ceiling for the entropy breadth bound: beyond any float and any
#: portfolio, so larger closed-form values are reported as exactly this.
BREADTH_CEILING = 10**300


def breadth_bound_entropy(alpha: float, entropy: EntropyParams) -> int:
    """Most names an entropy budget admits for a sleeve of size ``alpha``.

    Closed form ``floor(alpha * exp(dH_max / alpha))``, then corrected so the
    result is the exact largest integer K with
    ``entropy_increment_approx(alpha, K) <= dH_max`` in float arithmetic
    (the increment is monotone in K, so the boundary is well defined).
    An empty sleeve admits no names; bounds above ``BREADTH_CEILING`` are
    reported as the ceiling.
    """
    if alpha == 0:
        return 0
    if not 0 < alpha <= 1:
        raise ValidationError("alpha must lie in [0,1]", code="alpha_out_of_range", field="alpha")
    dh = entropy.delta_h_max

    def inc(k: int) -> float:
        share = alpha / k
        return -alpha * math.log(share) if share > 0 else math.inf

    x = dh / alpha
    try:
        guess = alpha * math.exp(x)
    except OverflowError:
        return BREADTH_CEILING
    if guess >= float(BREADTH_CEILING):
        return BREADTH_CEILING
    k = int(math.floor(guess))
    if k < 0:
        k = 0
    hi = max(2 * k, 8)
    while inc(hi) <= dh:
        hi *= 2
    lo = 0  # K = 0 is always admissible (no names, no increment)
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if inc(mid) <= dh:
            lo = mid
        else:
            hi = mid
    return lo
