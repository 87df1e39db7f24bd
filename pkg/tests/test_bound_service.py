"""Tests for BoundService classification and bound reports"""

import pytest

from concord.application.bound_service import BoundService
from concord.domain.config.output import OutputConfig
from concord.domain.models.bound_report import Guarantee
from concord.infrastructure.builtins import builtin_document
from concord.infrastructure.scenario_io import builtin_scenario, parse_scenario


def _variant_of(name: str, **changes):
    """Built-in scenario with some document fields replaced"""
    doc = builtin_document(name)
    doc.update(changes)
    return parse_scenario(doc)


def _pair_scenario(weights, variant="P2", x0=(0.0, 1.0)):
    return parse_scenario(
        {
            "name": "pair",
            "x0": list(x0),
            "protocol": {"variant": variant, "exponents": 0.5},
            "graph": {"n": len(weights), "weights": weights},
        }
    )


class TestClassify:
    """Tests for BoundService.classify"""

    @pytest.mark.parametrize(
        "name, basis",
        [
            ("cycle6", Guarantee.P2_UNDIRECTED),
            ("path6", Guarantee.P2_UNDIRECTED),
            ("cycle6-p1", Guarantee.P1_UNDIRECTED),
            ("cycle6-linear", Guarantee.LINEAR),
            ("switching-demo", Guarantee.P2_SWITCHING),
            ("leader-demo", Guarantee.P2_LEADER),
            ("leader-demo-p1", Guarantee.P1_LEADER),
            ("demo7", Guarantee.P1_STRONGLY_CONNECTED),
            ("demo7-linear", Guarantee.LINEAR),
            ("counterexample", Guarantee.NONE),
        ],
    )
    def test_builtin_bases(self, name, basis):
        """Test the guarantee of each built-in"""
        assert BoundService().classify(builtin_scenario(name))[0] == basis

    def test_counterexample_reason(self):
        """Test a disconnected switching segment is named"""
        _, reasons = BoundService().classify(builtin_scenario("counterexample"))
        assert reasons == ["segment 1 is not a connected undirected graph"]

    def test_p3_has_no_guarantee(self):
        """Test P3 scenarios get no bound"""
        scenario = _variant_of("cycle6", protocol={"variant": "P3", "exponents": 0.5})
        basis, reasons = BoundService().classify(scenario)
        assert basis == Guarantee.NONE
        assert "P3" in reasons[0]

    def test_nonuniform_p2(self):
        """Test per-agent exponents on an undirected graph give the non-uniform basis"""
        scenario = _variant_of(
            "cycle6", protocol={"variant": "P2", "exponents": [0.3, 0.5, 0.7, 0.5, 0.6, 0.4]}
        )
        assert BoundService().classify(scenario)[0] == Guarantee.P2_NONUNIFORM

    def test_detail_balanced(self):
        """Test a directed detail-balanced pair"""
        basis, _ = BoundService().classify(_pair_scenario([[0, 1], [2, 0]]))
        assert basis == Guarantee.P2_DETAIL_BALANCED

    def test_p1_spanning_tree(self):
        """Test a directed path under P1"""
        scenario = parse_scenario(
            {
                "name": "directed-path",
                "x0": [0.0, 1.0, 2.0],
                "protocol": {"variant": "P1", "exponents": 0.5},
                "graph": {"n": 3, "weights": [[0, 0, 0], [1, 0, 0], [0, 1, 0]]},
            }
        )
        assert BoundService().classify(scenario)[0] == Guarantee.P1_SPANNING_TREE

    def test_no_spanning_tree(self):
        """Test two isolated agents get no guarantee"""
        basis, reasons = BoundService().classify(_pair_scenario([[0, 0], [0, 0]], variant="P1"))
        assert basis == Guarantee.NONE
        assert reasons == ["the graph has no spanning tree"]


class TestBoundReport:
    """Tests for BoundService.report"""

    def test_cycle6(self):
        """Test the P2 report on the 6-cycle"""
        report = BoundService().report(builtin_scenario("cycle6"))
        assert report.v0 == pytest.approx(78.4167, abs=1e-4)
        assert report.bound == pytest.approx(4.2085, abs=2e-3)
        assert report.constants["lambda2_L"] == pytest.approx(2.0, abs=1e-6)
        assert report.constants["lambda2_LB"] == pytest.approx(2.5198, abs=1e-3)
        assert report.constants["K4"] == 1.0
        assert report.constants["K4_general"] == pytest.approx(1 / 12)
        assert report.thresholds.functional == "V3"
        assert (report.thresholds.alpha_lo, report.thresholds.alpha_hi) == (0.3, 0.8)

    def test_path6(self):
        """Test the P2 report on the 6-path"""
        report = BoundService().report(builtin_scenario("path6"))
        assert report.constants["lambda2_L"] == pytest.approx(0.5359, abs=1e-3)
        assert report.bound == pytest.approx(11.2999, abs=5e-3)

    def test_cycle6_small_v0(self):
        """Test V3(0) of the small-spread 6-cycle"""
        report = BoundService().report(builtin_scenario("cycle6-small"))
        assert report.v0 == pytest.approx(0.013842, abs=1e-6)

    def test_cycle6_p1_with_override(self):
        """Test the P1 report keeps the computed V0 and adds the quoted one"""
        report = BoundService().report(builtin_scenario("cycle6-p1"))
        assert report.v0 == pytest.approx(234.0)
        assert report.bound == pytest.approx(5.531, abs=1e-3)
        assert report.constants["V0_override"] == 338.0
        assert report.constants["bound_with_V0_override"] == pytest.approx(6.0638, abs=1e-3)
        assert any("differs" in note for note in report.notes)

    def test_switching(self):
        """Test the switching report takes the weakest segment"""
        report = BoundService().report(builtin_scenario("switching-demo"))
        assert report.constants["K6"] == pytest.approx(0.6752, abs=1e-3)
        assert report.constants["K4[4]"] == 1.0
        assert report.bound == pytest.approx(11.2999, abs=5e-3)

    def test_leader_demo(self):
        """Test the leader report uses 1-based labels"""
        report = BoundService().report(builtin_scenario("leader-demo"))
        assert report.basis == Guarantee.P2_LEADER
        assert report.constants["leader"] == 4
        assert report.v0 == pytest.approx(0.5 * (0.25 + 6.25 + 6.25))
        assert report.bound > 0

    def test_leader_demo_p1(self):
        """Test the P1 leader report"""
        report = BoundService().report(builtin_scenario("leader-demo-p1"))
        assert report.constants["leader"] == 4
        assert report.constants["lambda1_Bbar"] > 0
        assert report.bound > 0

    def test_demo7_without_k1(self):
        """Test the strongly connected P1 report without K1 gives no bound"""
        report = BoundService(output=OutputConfig(k1_samples=500)).report(
            builtin_scenario("demo7")
        )
        assert report.bound is None
        assert "K2" in report.constants
        assert "K1_sampled" in report.constants
        assert any("K1 not supplied" in note for note in report.notes)

    def test_demo7_with_k1(self):
        """Test a supplied K1 yields a bound"""
        doc = builtin_document("demo7")
        doc["analysis"] = {"k1": 0.05}
        report = BoundService(output=OutputConfig(k1_samples=0)).report(parse_scenario(doc))
        assert report.constants["K1"] == 0.05
        assert "K1_sampled" not in report.constants
        assert report.bound > 0

    def test_linear(self):
        """Test the linear report has no bound but keeps lambda2"""
        report = BoundService().report(builtin_scenario("cycle6-linear"))
        assert report.bound is None
        assert report.constants["lambda2_L"] == pytest.approx(2.0, abs=1e-6)

    def test_detail_balanced(self):
        """Test the detail-balanced report gives omega and V0 but no bound"""
        report = BoundService().report(_pair_scenario([[0, 1], [2, 0]]))
        assert report.bound is None
        assert report.constants["omega[1]"] == pytest.approx(2 / 3)
        assert report.constants["omega[2]"] == pytest.approx(1 / 3)
        assert report.v0 == pytest.approx(1 / 9)

    def test_single_agent(self):
        """Test one agent has V0 = 0 and bound 0"""
        scenario = parse_scenario(
            {
                "name": "single",
                "x0": [1.0],
                "protocol": {"variant": "P2", "exponents": 0.5},
                "graph": {"n": 1, "weights": [[0.0]]},
            }
        )
        report = BoundService().report(scenario)
        assert report.v0 == 0.0
        assert report.bound == 0.0

    def test_consensus_initial_state(self):
        """Test x0 at consensus gives bound 0"""
        scenario = _variant_of("cycle6", x0=[1.0] * 6)
        report = BoundService().report(scenario)
        assert report.v0 == 0.0
        assert report.bound == 0.0

    def test_override_without_bound(self):
        """Test a V0 override is ignored when no bound exists"""
        report = BoundService().report(
            _variant_of("cycle6-linear", analysis={"v0_override": 10.0})
        )
        assert any("ignored" in note for note in report.notes)

    def test_nonuniform_uses_k4(self):
        """Test the non-uniform report uses the conservative edge constant"""
        scenario = _variant_of(
            "cycle6", protocol={"variant": "P2", "exponents": [0.3, 0.5, 0.7, 0.5, 0.6, 0.4]}
        )
        report = BoundService().report(scenario)
        assert 0 < report.constants["K4"] <= 1
        assert report.bound > 0

    def test_p1_thresholds(self):
        """Test P1 rate thresholds on the edge energy"""
        scenario = _variant_of("cycle6-p1", analysis={"compare_alphas": [0.3, 0.8]})
        report = BoundService().report(scenario)
        assert report.thresholds.functional == "V5"
        assert report.thresholds.thresholds.lower == pytest.approx(1 / 16)

    def test_to_dict(self):
        """Test the report serializes with its basis name"""
        data = BoundService().report(builtin_scenario("cycle6")).to_dict()
        assert data["basis"] == "p2-undirected"
        assert data["thresholds"]["functional"] == "V3"
