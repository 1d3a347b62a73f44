"""
驗證活動服務（CampaignService）

- 依基礎種子為每個實例導出子種子，抽樣或窮舉地評估已註冊的敘述
- --jobs > 1 時以進程池平行評估；每個工作進程由同一份配置建立自己的容器
- 任何 FAILS 都要通過反例協定：判定器重算、第二種子重跑、表現隨機化重跑
"""
import json
import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

from application.dtos.report_dtos import (
    CampaignRequestDTO,
    CampaignResultDTO,
    CounterexampleDTO,
    OracleCheckResultDTO,
    OracleCheckRowDTO,
)
from config.settings import ORACLE_MODES, AppConfig
from domain.models.module import FPModule
from domain.models.quotient_ring import QuotientRing
from domain.models.statement import Statement
from domain.models.verdict import CampaignSummary, Conclusion, Hypotheses, Verdict
from domain.repositories.statement_repository import StatementRepository
from domain.services.homology_service import HomologyService
from domain.services.module_service import ModuleService
from domain.services.oracle_service import OracleService
from domain.services.ring_service import RingService
from features.freeness import Instance, InstanceSampler, TheoremService
from shared.exceptions import HomLabException, ValidationError
from shared.utils.helpers import Stopwatch, derive_seed

logger = logging.getLogger(__name__)

# 反例協定與裁判模式比對的 Ext 指標上限
PROTOCOL_EXT_UPTO = 2
ORACLE_CHECK_RINGS = ("artin_m2", "cubic", "quartic")

RingSpecs = Dict[str, Dict[str, Any]]


@dataclass
class InstanceOutcome:
    """單一實例的判決與（若已確認）反例"""
    verdict: Verdict
    counterexample: Optional[CounterexampleDTO] = None
    sampled: bool = False


# ---- 工作進程 ----

_worker_service: Optional["CampaignService"] = None


def _init_worker(config: AppConfig) -> None:
    global _worker_service
    from core.dependencies import build_container

    logging.basicConfig(level=config.log_level)
    _worker_service = build_container(config).get(CampaignService)


def _worker_call(task: Tuple[str, tuple]) -> Any:
    method, args = task
    return getattr(_worker_service, method)(*args)


def module_dump(M: FPModule) -> Dict[str, Any]:
    """反例輸出用的完整表現"""
    return {
        "name": M.name,
        "generator_twists": list(M.generator_twists),
        "relation_twists": list(M.relation_twists),
        "presentation": M.presentation.to_strings(),
    }


class CampaignService:
    """抽樣與窮舉驗證活動"""

    def __init__(
        self,
        config: AppConfig,
        statements: StatementRepository,
        rings: RingService,
        modules: ModuleService,
        homology: HomologyService,
        oracle: OracleService,
        sampler: InstanceSampler,
        theorems: TheoremService,
    ):
        self.config = config
        self.statements = statements
        self.rings = rings
        self.modules = modules
        self.homology = homology
        self.oracle = oracle
        self.sampler = sampler
        self.theorems = theorems
        self._declared: Dict[str, QuotientRing] = {}

    # ---- 環解析 ----------------------------------------------------------

    def resolve_ring(self, name: str, specs: Optional[RingSpecs] = None) -> QuotientRing:
        """腳本宣告的環優先，其次為目錄"""
        if specs and name in specs:
            key = json.dumps(specs[name], sort_keys=True)
            ring = self._declared.get(key)
            if ring is None:
                ring = self.rings.from_spec(specs[name])
                self._declared[key] = ring
            return ring
        return self.rings.catalog(name)

    # ---- 單一實例 ----------------------------------------------------------

    def run_instance(
        self,
        statement: Statement,
        ring_name: str,
        seed: int,
        index: int,
        oracle_mode: str,
        max_dim: Optional[int] = None,
        specs: Optional[RingSpecs] = None,
    ) -> InstanceOutcome:
        """抽樣、評估並在 FAILS 時執行反例協定"""
        ring = self.resolve_ring(ring_name, specs)
        instance = self.sampler.sample(statement, ring, seed, index, max_dim)
        return self.judge(statement, instance, oracle_mode)

    def judge(self, statement: Statement, instance: Instance, oracle_mode: str) -> InstanceOutcome:
        verdict = self._evaluate(statement, instance)
        if oracle_mode == "referee" and verdict.conclusion != Conclusion.INCONCLUSIVE:
            check = self.oracle_recompute(instance)
            if check is not None:
                verdict.payload["referee"] = check
                if not check["agree"]:
                    logger.error("[Campaign] 裁判比對不一致 %s seed=%d: %s", instance.label, instance.seed, check)
                    verdict.conclusion = Conclusion.INCONCLUSIVE
                    verdict.reason = "engine_disagreement"
        if verdict.fails:
            return self._confirm(statement, instance, verdict, oracle_mode)
        return InstanceOutcome(verdict, None, instance.sampled)

    def _evaluate(self, statement: Statement, instance: Instance) -> Verdict:
        try:
            return self.theorems.evaluate(statement, instance)
        except ValidationError:
            raise
        except HomLabException as e:
            logger.warning("[Campaign] %s seed=%d 計算錯誤: %s", instance.label, instance.seed, e.message)
            return Verdict(
                statement.id, Hypotheses(), Conclusion.INCONCLUSIVE,
                seed=instance.seed, reason=f"error:{e.error_code}", instance=instance.label,
            )

    # ---- 反例協定 ----------------------------------------------------------

    def oracle_recompute(self, instance: Instance) -> Optional[Dict[str, Any]]:
        """Artinian 環上以判定器重算 Ext 維數；無法比對時回傳 None"""
        ring = instance.ring
        if not ring.is_artinian or not instance.modules:
            return None
        R = self.modules.ring_module(ring)
        members = list(instance.modules.items())
        pairs = [(a, A, b, B) for a, A in members for b, B in members]
        pairs += [(a, A, "R", R) for a, A in members]
        rows = []
        for a, A, b, B in pairs:
            engine = [self.homology.ext_dim(A, B, i) for i in range(PROTOCOL_EXT_UPTO + 1)]
            oracle = self.oracle.lin_ext_dims(self.oracle.realize(A), self.oracle.realize(B), PROTOCOL_EXT_UPTO)
            rows.append({"pair": f"{a},{b}", "engine": engine, "oracle": oracle})
        return {"agree": all(row["engine"] == row["oracle"] for row in rows), "pairs": rows}

    def _confirm(self, statement: Statement, instance: Instance, verdict: Verdict, oracle_mode: str) -> InstanceOutcome:
        logger.warning("[Campaign] 反例候選 %s seed=%d", instance.label, instance.seed)
        protocol: List[Dict[str, Any]] = []
        confirmed = True

        if oracle_mode != "off":
            check = self.oracle_recompute(instance)
            if check is None:
                protocol.append({"step": "oracle", "skipped": "infinite_length"})
            else:
                protocol.append({"step": "oracle", **check})
                if not check["agree"]:
                    logger.error("[Campaign] 引擎與判定器不一致 %s seed=%d", instance.label, instance.seed)
                    verdict.conclusion = Conclusion.INCONCLUSIVE
                    verdict.reason = "engine_disagreement"
                    verdict.payload["protocol"] = protocol
                    return InstanceOutcome(verdict, None, instance.sampled)

        second = Instance(
            instance.label, instance.ring, dict(instance.modules), dict(instance.params),
            derive_seed(instance.seed, "confirm"),
        )
        rerun = self._evaluate(statement, second)
        protocol.append({"step": "second_seed", "seed": second.seed, "conclusion": rerun.conclusion.value})
        confirmed = confirmed and rerun.fails

        rng = np.random.default_rng(derive_seed(instance.seed, "randomize"))
        randomized = Instance(
            instance.label, instance.ring, {n: self._randomized(M, rng) for n, M in instance.modules.items()},
            dict(instance.params), instance.seed,
        )
        rerun = self._evaluate(statement, randomized)
        protocol.append({"step": "randomized_presentation", "conclusion": rerun.conclusion.value})
        confirmed = confirmed and rerun.fails

        if not confirmed:
            logger.warning("[Campaign] 反例未通過協定 %s: %s", instance.label, protocol)
            verdict.conclusion = Conclusion.INCONCLUSIVE
            verdict.reason = "unconfirmed_fail"
            verdict.payload["protocol"] = protocol
            return InstanceOutcome(verdict, None, instance.sampled)

        dump = {
            "label": instance.label,
            "seed": instance.seed,
            "ring": instance.ring.describe(),
            "params": dict(instance.params),
            "modules": {name: module_dump(M) for name, M in instance.modules.items()},
        }
        logger.error("[Campaign] 已確認的反例 %s seed=%d", instance.label, instance.seed)
        return InstanceOutcome(verdict, CounterexampleDTO(verdict, dump, protocol), instance.sampled)

    def _randomized(self, M: FPModule, rng: np.random.Generator) -> FPModule:
        result = self.modules.randomize_presentation(M, rng)
        if "ideal_generators" in M.cache:
            result.cache["ideal_generators"] = M.cache["ideal_generators"]
        return result

    # ---- 活動 ----------------------------------------------------------

    def run(self, request: CampaignRequestDTO, specs: Optional[RingSpecs] = None) -> CampaignResultDTO:
        """執行單一敘述的驗證活動"""
        statement = self.statements.get(request.statement_id)
        defaults = self.config.campaign
        oracle_mode = (request.oracle_mode or defaults.oracle_mode).lower()
        if oracle_mode not in ORACLE_MODES:
            raise ValidationError(f"--oracle 必須是 {'/'.join(ORACLE_MODES)} 之一", "bad_oracle_mode")
        ring_names = list(request.rings or statement.rings)
        if not ring_names:
            raise ValidationError(f"{statement.id} 沒有指定環", "missing_rings")

        watch = Stopwatch()
        logger.info(
            "[Campaign] %s seed=%d rings=%s oracle=%s%s",
            statement.id, request.seed, ",".join(ring_names), oracle_mode, " exhaustive" if request.exhaustive else "",
        )
        if request.exhaustive:
            outcomes = self._run_exhaustive(statement, ring_names, request, oracle_mode, specs)
        else:
            outcomes = self._run_sampled(statement, ring_names, request, oracle_mode, specs)

        verdicts = [o.verdict for o in outcomes]
        summary = CampaignSummary.from_verdicts(statement.id, request.seed, verdicts)
        summary.sampled = not request.exhaustive or any(o.sampled for o in outcomes)
        summary.budget_exhausted = request.exhaustive and any(o.sampled for o in outcomes)
        result = CampaignResultDTO(
            statement_id=statement.id,
            seed=request.seed,
            oracle_mode=oracle_mode,
            summary=summary,
            verdicts=verdicts,
            counterexamples=[o.counterexample for o in outcomes if o.counterexample is not None],
            exhaustive=request.exhaustive,
        )
        if statement.is_regression:
            result.expectation = statement.param("expect", "holds")
            result.expectation_met = bool(verdicts) and all(v.conclusion.value == result.expectation for v in verdicts)
            if not result.expectation_met:
                logger.warning("[Campaign] 回歸敘述 %s 未達預期 %s", statement.id, result.expectation)
        for reason, count in sorted(summary.discarded_reasons.items()):
            logger.info("[Campaign] %s 無結論 %s × %d", statement.id, reason, count)
        logger.info(
            "[Campaign] %s 完成：holds=%d fails=%d inconclusive=%d (%.0f ms)",
            statement.id, summary.holds, summary.fails, summary.inconclusive, watch.elapsed_ms(),
        )
        return result

    def run_suite(
        self, suite_id: str, request: CampaignRequestDTO, specs: Optional[RingSpecs] = None
    ) -> List[CampaignResultDTO]:
        """套件中每條敘述各跑一次；suite 為 all 時跑全部"""
        members = self.statements.list_all() if suite_id == "all" else self.statements.suite(suite_id)
        results = []
        for statement in members:
            sub = CampaignRequestDTO(
                statement_id=statement.id,
                seed=request.seed,
                rings=request.rings,
                samples=request.samples,
                jobs=request.jobs,
                oracle_mode=request.oracle_mode,
                exhaustive=request.exhaustive,
                max_dim=request.max_dim,
                budget=request.budget,
            )
            results.append(self.run(sub, specs))
        return results

    def search(self, request: CampaignRequestDTO, specs: Optional[RingSpecs] = None) -> List[CampaignResultDTO]:
        """反例搜尋：可窮舉的環先窮舉，未找到反例時再抽樣"""
        statement = self.statements.get(request.statement_id)
        ring_names = list(request.rings or statement.rings)
        enumerable = [
            name for name in ring_names if self.sampler.is_enumerable(statement, self.resolve_ring(name, specs))
        ]
        results = []
        if enumerable:
            results.append(self.run(replace(request, rings=enumerable, exhaustive=True), specs))
            if results[-1].has_verified_fail:
                logger.info("[Campaign] %s 窮舉階段已找到反例", statement.id)
                return results
        if statement.sampler != "fixed" or not enumerable:
            results.append(self.run(replace(request, rings=ring_names, exhaustive=False), specs))
        return results

    def _run_sampled(
        self,
        statement: Statement,
        ring_names: Sequence[str],
        request: CampaignRequestDTO,
        oracle_mode: str,
        specs: Optional[RingSpecs],
    ) -> List[InstanceOutcome]:
        samples = request.samples if request.samples is not None else self.config.campaign.samples
        if statement.sampler == "fixed":
            samples = len(ring_names)
        tasks = []
        for index in range(samples):
            ring_name = ring_names[index % len(ring_names)]
            seed = derive_seed(request.seed, statement.id, ring_name, index)
            tasks.append(("run_instance", (statement, ring_name, seed, index, oracle_mode, request.max_dim, specs)))
        return self._map(tasks, request.jobs)

    def _run_exhaustive(
        self,
        statement: Statement,
        ring_names: Sequence[str],
        request: CampaignRequestDTO,
        oracle_mode: str,
        specs: Optional[RingSpecs],
    ) -> List[InstanceOutcome]:
        budget = request.budget if request.budget is not None else self.config.campaign.enumeration_budget
        outcomes = []
        for ring_name in ring_names:
            ring = self.resolve_ring(ring_name, specs)
            for index, instance in enumerate(self.sampler.exhaustive(statement, ring, request.max_dim, budget)):
                instance.seed = derive_seed(request.seed, statement.id, ring_name, index)
                outcomes.append(self.judge(statement, instance, oracle_mode))
        return outcomes

    def _map(self, tasks: List[Tuple[str, tuple]], jobs: Optional[int]) -> List[Any]:
        """依序或以進程池執行；executor.map 保持任務順序"""
        jobs = jobs or self.config.campaign.jobs
        if jobs <= 1 or len(tasks) <= 1:
            return [getattr(self, method)(*args) for method, args in tasks]
        chunksize = max(1, len(tasks) // (jobs * 4))
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=(self.config,)) as pool:
            return list(pool.map(_worker_call, tasks, chunksize=chunksize))

    # ---- 判定器一致性 ------------------------------------------------------

    def oracle_pair(self, ring_name: str, index: int, seed: int, upto: int, max_dim: Optional[int] = None) -> OracleCheckRowDTO:
        ring = self.rings.catalog(ring_name)
        rng = np.random.default_rng(seed)
        dim = max_dim or self.config.campaign.max_dim
        X = self.oracle.random_module(ring, dim, rng)
        Y = self.oracle.random_module(ring, dim, rng)
        M = self.oracle.lin_to_fp(X, "M")
        N = self.oracle.lin_to_fp(Y, "N")
        engine = [self.homology.ext_dim(M, N, i) for i in range(upto + 1)]
        oracle = self.oracle.lin_ext_dims(X, Y, upto)
        if engine != oracle:
            logger.error("[Oracle] %s #%d seed=%d 不一致: engine=%s oracle=%s", ring_name, index, seed, engine, oracle)
        return OracleCheckRowDTO(ring_name, index, seed, engine, oracle)

    def oracle_check(
        self,
        seed: int,
        samples: Optional[int] = None,
        rings: Optional[Sequence[str]] = None,
        upto: int = 4,
        jobs: Optional[int] = None,
        max_dim: Optional[int] = None,
    ) -> OracleCheckResultDTO:
        """隨機有限長度對 (M, N) 上 GB 引擎與判定器的 Ext 維數比對"""
        ring_names = list(rings or ORACLE_CHECK_RINGS)
        samples = samples if samples is not None else self.config.campaign.samples
        for name in ring_names:
            if not self.rings.catalog(name).is_artinian:
                raise ValidationError(f"oracle-check 需要 Artinian 環: {name}", "not_artinian")
        tasks = [
            ("oracle_pair", (name, index, derive_seed(seed, "oracle-check", name, index), upto, max_dim))
            for name in ring_names
            for index in range(samples)
        ]
        result = OracleCheckResultDTO(seed, upto, self._map(tasks, jobs))
        logger.info("[Oracle] 比對 %d 組，%d 組不一致", len(result.rows), len(result.disagreements))
        return result
