from unittest.mock import MagicMock

import pytest

from application.dtos.report_dtos import CampaignRequestDTO, CommandResultDTO, ScriptRunDTO
from application.services.campaign_service import CampaignService
from config.settings import AppConfig
from domain.models.statement import Statement
from domain.models.verdict import Conclusion, Hypotheses, Verdict
from domain.repositories.statement_repository import InMemoryStatementRepository
from domain.services.homology_service import HomologyService
from domain.services.module_service import ModuleService
from domain.services.oracle_service import OracleService
from domain.services.ring_service import RingService
from features.freeness import Instance, InstanceSampler
from shared.exceptions import ValidationError


@pytest.fixture(scope="module")
def campaigns(container):
    return container.get(CampaignService)


def _stub_service(container, verdicts, statement):
    """以固定判決序列取代定理服務的活動服務"""
    theorems = MagicMock()
    queue = list(verdicts)

    def evaluate(stmt, instance):
        conclusion = queue.pop(0) if len(queue) > 1 else queue[0]
        return Verdict(stmt.id, Hypotheses(), conclusion, seed=instance.seed, instance=instance.label)

    theorems.evaluate.side_effect = evaluate
    return CampaignService(
        container.get(AppConfig),
        InMemoryStatementRepository([statement]),
        container.get(RingService),
        container.get(ModuleService),
        container.get(HomologyService),
        container.get(OracleService),
        container.get(InstanceSampler),
        theorems,
    )


FIXED = Statement("stub", "stub", "stub", "fixed", ("node",))


class TestSampledCampaigns:
    def test_minimal_syzygy(self, campaigns):
        result = campaigns.run(CampaignRequestDTO("minsyz", seed=3, rings=["artin_m2"], samples=2, oracle_mode="off"))
        assert result.summary.total == 2
        assert result.summary.fails == 0
        assert result.summary.sampled
        assert not result.has_verified_fail

    def test_reproducible(self, campaigns):
        request = CampaignRequestDTO("minsyz", seed=11, rings=["artin_m2"], samples=2, oracle_mode="off")
        first = campaigns.run(request).to_dict(include_timing=False, include_verdicts=True)
        second = campaigns.run(request).to_dict(include_timing=False, include_verdicts=True)
        assert first == second

    def test_fixed_statement_runs_once_per_ring(self, campaigns):
        result = campaigns.run(CampaignRequestDTO("conditions_needed", seed=1, samples=50))
        assert result.summary.total == 1
        assert result.expectation == "holds"
        assert result.expectation_met

    def test_expected_inconclusive(self, campaigns):
        result = campaigns.run(CampaignRequestDTO("dualfree_sum_with_residue", seed=1, samples=2))
        assert result.expectation == "inconclusive"
        assert result.expectation_met

    @pytest.mark.parametrize("statement_id", ["dualfree", "hom_free_summand", "hom_free_free", "hom_free_extt"])
    def test_hypotheses_are_met_by_sampling(self, campaigns, statement_id):
        result = campaigns.run(
            CampaignRequestDTO(statement_id, seed=42, rings=["artin_m2"], samples=5, max_dim=2, oracle_mode="off")
        )
        assert result.summary.holds > 0
        assert result.summary.fails == 0

    def test_bad_oracle_mode(self, campaigns):
        with pytest.raises(ValidationError) as exc:
            campaigns.run(CampaignRequestDTO("minsyz", seed=1, oracle_mode="sometimes"))
        assert exc.value.error_code == "bad_oracle_mode"

    def test_missing_rings(self, container):
        service = _stub_service(container, [Conclusion.HOLDS], Statement("bare", "bare", "stub", "fixed"))
        with pytest.raises(ValidationError) as exc:
            service.run(CampaignRequestDTO("bare", seed=1))
        assert exc.value.error_code == "missing_rings"

    def test_referee_mode_records_comparison(self, campaigns):
        result = campaigns.run(
            CampaignRequestDTO("minsyz", seed=5, rings=["artin_m2"], samples=1, oracle_mode="referee")
        )
        verdict = result.verdicts[0]
        assert verdict.payload["referee"]["agree"]


class TestExhaustive:
    def test_small_enumeration(self, campaigns):
        result = campaigns.run(
            CampaignRequestDTO("minsyz", seed=2, rings=["artin_m2"], exhaustive=True, max_dim=1, oracle_mode="off")
        )
        assert result.summary.holds == 2
        assert not result.summary.sampled
        assert not result.summary.budget_exhausted

    def test_search_enumerates_then_samples(self, campaigns):
        results = campaigns.search(
            CampaignRequestDTO("minsyz", seed=2, rings=["artin_m2"], samples=1, max_dim=1, oracle_mode="off")
        )
        assert [r.exhaustive for r in results] == [True, False]

    def test_search_fixed_statement(self, campaigns):
        results = campaigns.search(CampaignRequestDTO("fitting_sharp", seed=2))
        assert len(results) == 1
        assert results[0].summary.holds == 1

    @pytest.mark.parametrize("statement_id", ["dualfree", "hom_free_summand", "hom_free_free", "hom_free_extt"])
    def test_enumeration_reaches_the_conclusion(self, campaigns, statement_id):
        result = campaigns.run(
            CampaignRequestDTO(statement_id, seed=4, exhaustive=True, max_dim=1, oracle_mode="off")
        )
        assert result.summary.holds > 0
        assert result.summary.fails == 0

    def test_regression_suite(self, campaigns):
        results = campaigns.run_suite("regression", CampaignRequestDTO("", seed=0, samples=2, oracle_mode="off"))
        assert {r.statement_id for r in results} == {"fitting_sharp", "conditions_needed", "dualfree_sum_with_residue"}
        assert all(r.expectation_met for r in results)


class TestCounterexampleProtocol:
    def test_confirmed_failure(self, container):
        service = _stub_service(container, [Conclusion.FAILS], FIXED)
        result = service.run(CampaignRequestDTO("stub", seed=9))
        assert result.has_verified_fail
        steps = [step["step"] for step in result.counterexamples[0].protocol]
        assert steps == ["oracle", "second_seed", "randomized_presentation"]
        assert result.counterexamples[0].protocol[0]["skipped"] == "infinite_length"
        run = ScriptRunDTO(seed=9, oracle_mode="on", results=[CommandResultDTO("verify", "stub", campaigns=[result])])
        assert run.exit_code == 2

    def test_failure_not_reproduced(self, container):
        service = _stub_service(container, [Conclusion.FAILS, Conclusion.HOLDS], FIXED)
        result = service.run(CampaignRequestDTO("stub", seed=9))
        assert not result.has_verified_fail
        assert result.verdicts[0].conclusion == Conclusion.INCONCLUSIVE
        assert result.verdicts[0].reason == "unconfirmed_fail"
        assert result.summary.discarded_reasons == {"unconfirmed_fail": 1}


class TestOracle:
    def test_recompute_skips_positive_dimension(self, campaigns, node):
        assert campaigns.oracle_recompute(Instance("x", node)) is None

    def test_oracle_check(self, campaigns):
        result = campaigns.oracle_check(seed=3, samples=2, rings=["cubic"], upto=2, max_dim=2)
        assert result.table() == {"cubic": {"pairs": 2, "agree": 2}}
        assert result.disagreements == []

    def test_oracle_check_rejects_positive_dimension(self, campaigns):
        with pytest.raises(ValidationError) as exc:
            campaigns.oracle_check(seed=3, samples=1, rings=["node"])
        assert exc.value.error_code == "not_artinian"


class TestRingResolution:
    def test_declared_rings_are_cached(self, campaigns):
        specs = {"D": {"name": "D", "p": 3, "variables": [["t", 1]], "ideal": ["t^2"]}}
        ring = campaigns.resolve_ring("D", specs)
        assert ring is campaigns.resolve_ring("D", specs)
        assert ring.is_artinian
        assert campaigns.resolve_ring("cubic", specs).name == "cubic"


@pytest.mark.slow
class TestParallel:
    def test_jobs_do_not_change_results(self, campaigns):
        request = CampaignRequestDTO("minsyz", seed=4, rings=["artin_m2"], samples=4, oracle_mode="off")
        serial = campaigns.run(request).to_dict(include_timing=False, include_verdicts=True)
        request.jobs = 2
        parallel = campaigns.run(request).to_dict(include_timing=False, include_verdicts=True)
        assert serial == parallel
