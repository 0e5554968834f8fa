"""CSV ingestion and report emission."""

import pytest

from satfeas import (
    CascadeInput,
    ExclusionCategory,
    TierClass,
    ValidationError,
    run_cascade,
)
from satfeas.io import (
    dump_candidates,
    emit_report,
    load_candidates,
    load_core_weights,
    load_events,
    load_proposal_trades,
    parse_report,
)

from conftest import make_asset, make_params


def write(tmp_path, name, text):
    path = tmp_path / name
    path.write_text(text)
    return path


CANDIDATE_HEADER = "id,tier,adv_usd,round_trip_cost_bps,gaer_admissible,exclusion\n"


class TestLoadCandidates:
    def test_happy_path(self, tmp_path):
        path = write(tmp_path, "u.csv", CANDIDATE_HEADER +
                     "CHIP1,A,5000000,,true,none\n")
        (asset,) = load_candidates(path)
        assert asset.tier is TierClass.A
        assert asset.adv_usd == 5e6
        assert asset.round_trip_cost_bps is None
        assert asset.gaer_admissible and asset.exclusion is ExclusionCategory.NONE

    def test_exclusion_category_parsed(self, tmp_path):
        path = write(tmp_path, "u.csv", CANDIDATE_HEADER +
                     "ETF9,B,2000000,,true,thematic_etf\n")
        (asset,) = load_candidates(path)
        assert asset.exclusion is ExclusionCategory.THEMATIC_ETF

    def test_row_level_error_carries_row_number(self, tmp_path):
        path = write(tmp_path, "u.csv", CANDIDATE_HEADER +
                     "OK1,A,5000000,,true,none\nX,A,-5,,true,none\n")
        with pytest.raises(ValidationError) as err:
            load_candidates(path)
        assert "row 3" in str(err.value)

    def test_bad_header_rejected(self, tmp_path):
        path = write(tmp_path, "u.csv", "id,tier,adv\nX,A,5\n")
        with pytest.raises(ValidationError) as err:
            load_candidates(path)
        assert err.value.code == "bad_header"

    def test_duplicate_id_rejected(self, tmp_path):
        path = write(tmp_path, "u.csv", CANDIDATE_HEADER +
                     "A1,A,1000,,true,none\nA1,B,2000,,true,none\n")
        with pytest.raises(ValidationError) as err:
            load_candidates(path)
        assert err.value.code == "duplicate_id"

    def test_case_insensitive_enums(self, tmp_path):
        path = write(tmp_path, "u.csv", CANDIDATE_HEADER +
                     "A1,a,1000,,TRUE,None\n")
        (asset,) = load_candidates(path)
        assert asset.tier is TierClass.A and asset.gaer_admissible

    def test_cost_override_parsed(self, tmp_path):
        path = write(tmp_path, "u.csv", CANDIDATE_HEADER +
                     "A1,C,1000,12.5,false,none\n")
        (asset,) = load_candidates(path)
        assert asset.round_trip_cost_bps == 12.5 and not asset.gaer_admissible

    def test_round_trip_through_dump(self, tmp_path):
        assets = [make_asset(id="A1", tier=TierClass.B, adv_usd=1234567.89,
                             round_trip_cost_bps=7.25),
                  make_asset(id="A2", tier=TierClass.C, adv_usd=5e6, gaer=False,
                             exclusion=ExclusionCategory.SMALL_CAP_SPECIALIST)]
        path = write(tmp_path, "u.csv", dump_candidates(assets))
        assert load_candidates(path) == assets


class TestOtherLoaders:
    def test_core_weights_normalized(self, tmp_path):
        path = write(tmp_path, "core.csv", "id,weight\nC1,0.6\nC2,0.4\n")
        assert load_core_weights(path) == [("C1", 0.6), ("C2", 0.4)]

    def test_core_weights_must_sum_to_one(self, tmp_path):
        path = write(tmp_path, "core.csv", "id,weight\nC1,0.6\nC2,0.3\n")
        with pytest.raises(ValidationError) as err:
            load_core_weights(path)
        assert err.value.code == "weights_not_normalized"

    def test_proposal_loader(self, tmp_path):
        path = write(tmp_path, "p.csv", "id,delta_w\nA1,0.02\nA2,-0.01\n")
        assert load_proposal_trades(path) == [("A1", 0.02), ("A2", -0.01)]

    def test_events_grouped_by_date(self, tmp_path):
        path = write(tmp_path, "e.csv",
                     "date,id,delta_w,schedule_due,structural_break\n"
                     "2025-03-31,A1,0.01,false,false\n"
                     "2025-03-31,A2,-0.02,false,false\n"
                     "2025-06-30,A1,0.03,true,false\n")
        events = load_events(path)
        assert len(events) == 2
        assert events[0].proposal.trades == (("A1", 0.01), ("A2", -0.02))
        assert not events[0].proposal.schedule_due
        assert events[1].proposal.schedule_due

    def test_events_flags_must_agree_within_date(self, tmp_path):
        path = write(tmp_path, "e.csv",
                     "date,id,delta_w,schedule_due,structural_break\n"
                     "2025-03-31,A1,0.01,false,false\n"
                     "2025-03-31,A2,-0.02,true,false\n")
        with pytest.raises(ValidationError) as err:
            load_events(path)
        assert err.value.code == "inconsistent_flags"

    def test_events_out_of_order_rejected(self, tmp_path):
        path = write(tmp_path, "e.csv",
                     "date,id,delta_w,schedule_due,structural_break\n"
                     "2025-06-30,A1,0.01,false,false\n"
                     "2025-03-31,A2,-0.02,false,false\n")
        with pytest.raises(ValidationError) as err:
            load_events(path)
        assert err.value.code == "events_out_of_order"


class TestEmitReport:
    def run_fixture(self):
        tiers = [TierClass.A, TierClass.A, TierClass.B, TierClass.B, TierClass.C]
        candidates = tuple(make_asset(id=f"N{i}", tier=t) for i, t in enumerate(tiers))
        return run_cascade(CascadeInput(candidates=candidates,
                                        params=make_params(min_effect_bps=0.2),
                                        kappa_a=1.5, kappa_c=0.5, theme="ai"))

    def test_json_contains_all_layers_and_flag(self):
        import json

        report, design = self.run_fixture()
        doc = json.loads(emit_report(report, design, "json"))
        assert doc["report"]["admissible"] is True
        assert set(doc["report"]["layers"]) == {"domain", "structural", "epistemic",
                                                "economic", "physical"}

    def test_json_round_trip_is_field_identical(self):
        report, design = self.run_fixture()
        data = emit_report(report, design, "json")
        parsed_report, parsed_design = parse_report(data)
        assert parsed_report == report
        assert parsed_design == design

    def test_json_is_stable_key_ordered(self):
        report, design = self.run_fixture()
        assert emit_report(report, design, "json") == emit_report(report, design, "json")

    def test_text_layer_rows_in_cascade_order(self):
        report, design = self.run_fixture()
        text = emit_report(report, design, "text").decode()
        positions = [text.index(f"\n{name} ") for name in
                     ("domain", "structural", "epistemic", "economic", "physical")]
        assert positions == sorted(positions)

    def test_unknown_format_rejected(self):
        report, design = self.run_fixture()
        with pytest.raises(ValidationError):
            emit_report(report, design, "yaml")
