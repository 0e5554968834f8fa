"""Construction validation and serialization round-trips for the domain types."""

import pytest

from satfeas import (
    Asset,
    EconParams,
    EntropyParams,
    ExclusionCategory,
    FeasibilityParams,
    ImpactParams,
    Portfolio,
    RebalanceProposal,
    SatelliteDesign,
    StructuralParams,
    TierClass,
    ValidationError,
)

from conftest import make_asset, make_params


class TestValidation:
    def test_asset_rejects_nonpositive_adv(self):
        with pytest.raises(ValidationError) as err:
            make_asset(adv_usd=0)
        assert err.value.code == "adv_must_be_positive"
        assert "adv_usd" in str(err.value)

    def test_asset_rejects_negative_cost_override(self):
        with pytest.raises(ValidationError) as err:
            make_asset(round_trip_cost_bps=-1.0)
        assert err.value.field == "round_trip_cost_bps"

    def test_impact_delta_must_be_in_open_unit_interval(self):
        for bad in (0.0, 1.0, 1.2, -0.1):
            with pytest.raises(ValidationError, match="delta must lie in"):
                ImpactParams(c=0.1, delta=bad, impact_cap=0.01)

    def test_participation_cap_range(self):
        with pytest.raises(ValidationError):
            ImpactParams(c=0.1, delta=0.5, impact_cap=0.01, participation_cap=0.0)
        ImpactParams(c=0.1, delta=0.5, impact_cap=0.01, participation_cap=1.0)

    def test_econ_rejects_zero_cost(self):
        with pytest.raises(ValidationError, match="round_trip_cost_bps"):
            EconParams(round_trip_cost_bps=0.0)

    def test_structural_allows_zero_loss_tolerance(self):
        p = StructuralParams(loss_tolerance=0.0, max_drawdown=0.5)
        assert p.loss_tolerance == 0.0

    def test_structural_rejects_zero_drawdown(self):
        with pytest.raises(ValidationError, match="max_drawdown"):
            StructuralParams(loss_tolerance=0.05, max_drawdown=0.0)

    def test_structural_rejects_inverted_policy_range(self):
        with pytest.raises(ValidationError):
            StructuralParams(loss_tolerance=0.05, max_drawdown=0.5,
                             alpha_policy_min=0.2, alpha_policy_max=0.1)

    def test_entropy_budget_nonnegative(self):
        with pytest.raises(ValidationError, match="delta_h_max"):
            EntropyParams(delta_h_max=-0.1)

    def test_params_reject_nonpositive_aum(self):
        with pytest.raises(ValidationError, match="aum_usd"):
            make_params(aum_usd=0)

    def test_params_reject_turnover_outside_unit_interval(self):
        with pytest.raises(ValidationError, match="turnover_fraction"):
            make_params(turnover_fraction=0.0)
        with pytest.raises(ValidationError, match="turnover_fraction"):
            make_params(turnover_fraction=1.5)

    def test_design_weights_must_sum_to_alpha(self):
        with pytest.raises(ValidationError) as err:
            SatelliteDesign(theme="t", alpha=0.1, constituents=(("a", 0.05), ("b", 0.06)))
        assert err.value.code == "weights_do_not_sum_to_alpha"

    def test_design_rejects_duplicate_ids(self):
        with pytest.raises(ValidationError) as err:
            SatelliteDesign(theme="t", alpha=0.1, constituents=(("a", 0.05), ("a", 0.05)))
        assert err.value.code == "duplicate_id"

    def test_design_rejects_negative_weight(self):
        with pytest.raises(ValidationError):
            SatelliteDesign(theme="t", alpha=0.0, constituents=(("a", -0.1), ("b", 0.1)))

    def test_design_kappa_bounds(self):
        with pytest.raises(ValidationError):
            SatelliteDesign(theme="t", alpha=0.1, constituents=(("a", 0.1),), kappa_a=0.9)
        with pytest.raises(ValidationError):
            SatelliteDesign(theme="t", alpha=0.1, constituents=(("a", 0.1),), kappa_c=0.0)

    def test_portfolio_total_must_be_one(self):
        sat = SatelliteDesign(theme="t", alpha=0.1, constituents=(("a", 0.1),))
        with pytest.raises(ValidationError) as err:
            Portfolio(core_weights=(("core", 0.8),), satellite=sat)
        assert err.value.code == "weights_do_not_sum_to_one"
        Portfolio(core_weights=(("core", 0.9),), satellite=sat)

    def test_proposal_rejects_duplicate_trades(self):
        with pytest.raises(ValidationError):
            RebalanceProposal(trades=(("a", 0.1), ("a", -0.1)))

    def test_types_are_immutable(self):
        asset = make_asset()
        with pytest.raises(AttributeError):
            asset.adv_usd = 1.0


class TestRoundTrips:
    def test_asset_dict_round_trip(self):
        asset = make_asset(id="CHIP1", tier=TierClass.B, adv_usd=2.5e6,
                           exclusion=ExclusionCategory.THEMATIC_ETF,
                           round_trip_cost_bps=12.5)
        assert Asset.from_dict(asset.to_dict()) == asset

    def test_design_dict_round_trip(self):
        design = SatelliteDesign(theme="ai", alpha=0.1,
                                 constituents=(("a", 0.06), ("b", 0.04)),
                                 kappa_a=1.5, kappa_c=0.5)
        assert SatelliteDesign.from_dict(design.to_dict()) == design

    def test_portfolio_dict_round_trip(self):
        sat = SatelliteDesign(theme="t", alpha=0.2, constituents=(("a", 0.2),))
        pf = Portfolio(core_weights=(("c1", 0.5), ("c2", 0.3)), satellite=sat)
        assert Portfolio.from_dict(pf.to_dict()) == pf

    def test_proposal_dict_round_trip(self):
        prop = RebalanceProposal(trades=(("a", 0.1), ("b", -0.02)),
                                 schedule_due=True, structural_break=False)
        assert RebalanceProposal.from_dict(prop.to_dict()) == prop

    def test_unknown_keys_rejected(self):
        design = SatelliteDesign(theme="t", alpha=0.1, constituents=(("a", 0.1),))
        data = design.to_dict()
        data["alpha_forecast"] = 0.2
        with pytest.raises(ValidationError, match="unknown key"):
            SatelliteDesign.from_dict(data)

    def test_tier_and_exclusion_parse_case_insensitively(self):
        assert TierClass.parse(" a ") is TierClass.A
        assert ExclusionCategory.parse("Thematic_ETF") is ExclusionCategory.THEMATIC_ETF
        with pytest.raises(ValidationError):
            TierClass.parse("d")
