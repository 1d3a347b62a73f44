"""
腳本命令處理器
依序執行已解析的腳本：宣告環與模組，處理 compute / verify / search / oracle-check
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional

from application.dtos.report_dtos import CampaignRequestDTO, CommandResultDTO, RunOptionsDTO, ScriptRunDTO
from application.dtos.script_dtos import (
    ByArg,
    Compute,
    ExprList,
    Flags,
    IntArg,
    ModuleDecl,
    OracleCheck,
    Ref,
    RingDecl,
    Script,
    Search,
    Statement,
    TwistsArg,
    Verify,
    flag_value,
    format_arg,
)
from application.services.application_service import WorkbenchService
from application.services.campaign_service import CampaignService
from config.ring_catalog import find_ring_spec
from config.settings import ORACLE_MODES, AppConfig
from domain.models.module import FPModule
from domain.models.polynomial import Polynomial
from domain.models.quotient_ring import QuotientRing
from domain.services.ring_service import RingService
from shared.exceptions import HomLabException, ParseError, ValidationError
from shared.utils.expressions import Expr, evaluate_expression, render_expression
from shared.utils.helpers import Stopwatch

logger = logging.getLogger(__name__)

CAMPAIGN_FLAGS = ("seed", "samples", "jobs", "oracle", "budget", "max-dim", "exhaustive", "ring")
ORACLE_CHECK_FLAGS = ("seed", "samples", "jobs", "ring", "upto", "max-dim")


@dataclass
class _Session:
    """腳本執行中的名稱環境"""
    rings: Dict[str, QuotientRing] = field(default_factory=dict)
    modules: Dict[str, FPModule] = field(default_factory=dict)
    specs: Dict[str, Dict[str, Any]] = field(default_factory=dict)

    def declare(self, name: str, value: Any, line: int, column: int) -> None:
        if name in self.rings or name in self.modules:
            raise ParseError(f"名稱 {name!r} 已宣告過", line, column, "duplicate_name")
        if isinstance(value, QuotientRing):
            self.rings[name] = value
        else:
            self.modules[name] = value


class CommandHandler:
    """腳本命令處理器"""

    def __init__(
        self,
        config: AppConfig,
        workbench: WorkbenchService,
        campaigns: CampaignService,
        rings: RingService,
    ):
        self.config = config
        self.workbench = workbench
        self.campaigns = campaigns
        self.rings = rings

        # 敘述種類映射
        self.statement_handlers: Dict[type, Callable[[Any, _Session, RunOptionsDTO], Optional[CommandResultDTO]]] = {
            RingDecl: self._handle_ring,
            ModuleDecl: self._handle_module,
            Compute: self._handle_compute,
            Verify: self._handle_verify,
            Search: self._handle_search,
            OracleCheck: self._handle_oracle_check,
        }

    def run(self, script: Script, options: RunOptionsDTO) -> ScriptRunDTO:
        """依序執行；第一個錯誤後停止並記錄"""
        session = _Session()
        oracle_mode = (options.oracle_mode or self.config.campaign.oracle_mode).lower()
        run = ScriptRunDTO(seed=options.seed, oracle_mode=oracle_mode)
        logger.info("[CLI] 執行 %d 個敘述 seed=%d", len(script.statements), options.seed)

        for node in script.statements:
            try:
                result = self._execute(node, session, options)
            except HomLabException as e:
                run.error = self._error_dict(e)
                logger.error("[CLI] %s", e.message)
                break
            if result is not None:
                run.results.append(result)

        run.rings = {name: ring.describe() for name, ring in session.rings.items()}
        return run

    def _execute(self, node: Statement, session: _Session, options: RunOptionsDTO) -> Optional[CommandResultDTO]:
        handler = self.statement_handlers[type(node)]
        try:
            return handler(node, session, options)
        except ParseError:
            raise
        except ValidationError as e:
            # 執行期的輸入錯誤以敘述位置回報
            raise ParseError(e.message, node.line, node.column, e.error_code)

    @staticmethod
    def _error_dict(e: HomLabException) -> Dict[str, Any]:
        error: Dict[str, Any] = {"code": e.error_code, "message": e.message}
        if isinstance(e, ParseError):
            error["line"] = e.line
            error["column"] = e.column
        return error

    # ---- 宣告 ----------------------------------------------------------

    def _handle_ring(self, node: RingDecl, session: _Session, options: RunOptionsDTO) -> None:
        if node.catalog is not None:
            ring = self.rings.catalog(node.catalog)
            session.declare(node.name, ring, node.line, node.column)
            if node.name != ring.name:
                # 別名也要能在工作進程中解析
                session.specs[node.name] = dict(find_ring_spec(node.catalog), name=node.name)
            return None
        spec = {
            "name": node.name,
            "p": node.p,
            "variables": [[v, w] for v, w in node.variables],
            "ideal": [render_expression(e) for e in node.ideal],
        }
        ring = self.rings.from_spec(spec)
        session.declare(node.name, ring, node.line, node.column)
        session.specs[node.name] = spec
        logger.info("[Ring] %s = %s", node.name, ring.describe())
        return None

    def _handle_module(self, node: ModuleDecl, session: _Session, options: RunOptionsDTO) -> None:
        if node.constructor == "coker":
            module = self._coker(node, session)
        else:
            args = self._resolve(node.args, session)
            module = self.workbench.construct(node.constructor, args, node.name)
        session.declare(node.name, module, node.line, node.column)
        return None

    def _coker(self, node: ModuleDecl, session: _Session) -> FPModule:
        ring = self._ring_ref(node.args[0], session)
        matrix = node.args[1]
        twists = None
        if len(node.args) > 2 and isinstance(node.args[2], TwistsArg):
            twists = list(node.args[2].values)
        rows = [[self._poly(e, ring) for e in row] for row in matrix.rows]
        return self.workbench.coker(ring, rows, twists, node.name)

    # ---- 參數解析 ------------------------------------------------------

    def _ring_ref(self, arg: Ref, session: _Session) -> QuotientRing:
        if arg.name not in session.rings:
            raise ParseError(f"{arg.name!r} 不是已宣告的環", arg.line, arg.column, "unknown_identifier")
        return session.rings[arg.name]

    @staticmethod
    def _poly(expr: Expr, ring: QuotientRing) -> Polynomial:
        return evaluate_expression(expr, ring.ambient.variable_map(), ring.ambient.constant)

    def _resolve(self, args, session: _Session) -> List[Any]:
        """Ref 解析為模組或環；多項式在第一個模組或環的環中求值"""
        resolved: List[Any] = []
        context: Optional[QuotientRing] = None
        for arg in args:
            if isinstance(arg, Ref):
                if arg.name in session.modules:
                    value = session.modules[arg.name]
                    context = context or value.ring
                elif arg.name in session.rings:
                    value = session.rings[arg.name]
                    context = context or value
                else:
                    raise ParseError(f"未知的識別字 {arg.name!r}", arg.line, arg.column, "unknown_identifier")
                resolved.append(value)
            elif isinstance(arg, IntArg):
                resolved.append(arg.value)
            elif isinstance(arg, (ExprList, ByArg)):
                if context is None:
                    raise ValidationError("多項式參數之前需要一個模組或環", "missing_ring")
                exprs = arg.items if isinstance(arg, ExprList) else (arg.expr,)
                resolved.extend(self._poly(e, context) for e in exprs)
            else:
                raise ValidationError("矩陣參數只能用於 coker", "bad_arguments")
        return resolved

    # ---- 指令 ----------------------------------------------------------

    def _handle_compute(self, node: Compute, session: _Session, options: RunOptionsDTO) -> CommandResultDTO:
        watch = Stopwatch()
        label = node.label or " ".join([node.operation] + [format_arg(a) for a in node.args])
        value = self.workbench.compute(node.operation, self._resolve(node.args, session), options.seed)
        logger.info("[CLI] compute %s = %s", label, value if not isinstance(value, dict) else "{...}")
        return CommandResultDTO("compute", label, value=value, elapsed_ms=watch.elapsed_ms())

    def _handle_verify(self, node: Verify, session: _Session, options: RunOptionsDTO) -> CommandResultDTO:
        watch = Stopwatch()
        request = self._campaign_request(node.suite, node.flags, options)
        results = self.campaigns.run_suite(node.suite, request, session.specs)
        return CommandResultDTO("verify", node.suite, campaigns=results, elapsed_ms=watch.elapsed_ms())

    def _handle_search(self, node: Search, session: _Session, options: RunOptionsDTO) -> CommandResultDTO:
        watch = Stopwatch()
        request = self._campaign_request(node.statement, node.flags, options)
        results = self.campaigns.search(request, session.specs)
        return CommandResultDTO("search", node.statement, campaigns=results, elapsed_ms=watch.elapsed_ms())

    def _handle_oracle_check(self, node: OracleCheck, session: _Session, options: RunOptionsDTO) -> CommandResultDTO:
        self._check_flags(node.flags, ORACLE_CHECK_FLAGS)
        watch = Stopwatch()
        rings = self._ring_list(node.flags) or options.rings
        result = self.campaigns.oracle_check(
            seed=self._int_flag(node.flags, "seed", options.seed),
            samples=self._int_flag(node.flags, "samples", options.samples),
            rings=rings,
            upto=self._int_flag(node.flags, "upto", 4),
            jobs=self._int_flag(node.flags, "jobs", options.jobs),
            max_dim=self._int_flag(node.flags, "max-dim", options.max_dim),
        )
        return CommandResultDTO("oracle-check", "oracle-check", oracle_check=result, elapsed_ms=watch.elapsed_ms())

    # ---- 旗標 ----------------------------------------------------------

    def _campaign_request(self, target: str, flags: Flags, options: RunOptionsDTO) -> CampaignRequestDTO:
        """腳本旗標優先於命令列選項，命令列選項優先於配置"""
        self._check_flags(flags, CAMPAIGN_FLAGS)
        oracle_mode = flag_value(flags, "oracle", options.oracle_mode)
        if oracle_mode is not None and oracle_mode.lower() not in ORACLE_MODES:
            raise ValidationError(f"--oracle 必須是 {'/'.join(ORACLE_MODES)} 之一", "bad_oracle_mode")
        return CampaignRequestDTO(
            statement_id=target,
            seed=self._int_flag(flags, "seed", options.seed),
            rings=self._ring_list(flags) or options.rings,
            samples=self._int_flag(flags, "samples", options.samples),
            jobs=self._int_flag(flags, "jobs", options.jobs),
            oracle_mode=oracle_mode,
            exhaustive=flag_value(flags, "exhaustive") is not None or options.exhaustive,
            max_dim=self._int_flag(flags, "max-dim", options.max_dim),
            budget=self._int_flag(flags, "budget", options.budget),
        )

    @staticmethod
    def _check_flags(flags: Flags, allowed) -> None:
        for name, _ in flags:
            if name not in allowed:
                raise ValidationError(f"未知的旗標 --{name}", "unknown_flag")

    @staticmethod
    def _int_flag(flags: Flags, name: str, default: Optional[int]) -> Optional[int]:
        value = flag_value(flags, name)
        if value is None:
            return default
        try:
            return int(value)
        except ValueError:
            raise ValidationError(f"--{name} 需要整數，但讀到 {value!r}", "bad_flag_value")

    @staticmethod
    def _ring_list(flags: Flags) -> Optional[List[str]]:
        value = flag_value(flags, "ring")
        return value.split(",") if value else None
