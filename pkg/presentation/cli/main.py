"""
命令列入口

    homlab compute scripts/tour.hl --json
    homlab verify --suite minsyz --samples 500 --seed 42
    homlab search --statement fitting --ring cubic --max-dim 3
    homlab oracle-check --samples 200

結束碼：0 正常；1 用法或計算錯誤；2 已確認的反例
"""
import argparse
import logging
import sys
from typing import List, Optional

from application.dtos.report_dtos import RunOptionsDTO
from application.dtos.script_dtos import OracleCheck, Script, Search, Verify
from application.handlers.command_handler import CommandHandler
from config.settings import HOMLAB_VERSION, ORACLE_MODES, AppConfig, get_config
from core.container import Container
from core.dependencies import build_container
from presentation.cli.script_parser import parse_script
from presentation.reports.report_builders import ReportBuilder, TextReportRenderer
from shared.exceptions import HomLabException

logger = logging.getLogger(__name__)


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="基礎種子（預設 HOMLAB_SEED）")
    parser.add_argument("--samples", type=int, default=None, help="每條敘述的抽樣數")
    parser.add_argument("--jobs", type=int, default=None, help="平行工作進程數")
    parser.add_argument("--oracle", choices=ORACLE_MODES, default=None, help="判定器模式")
    parser.add_argument("--budget", type=int, default=None, help="窮舉枚舉預算")
    parser.add_argument("--max-dim", type=int, default=None, dest="max_dim", help="枚舉模組的最大維數")
    parser.add_argument("--exhaustive", action="store_true", help="在可窮舉時窮舉")
    parser.add_argument("--ring", action="append", default=None, help="環名稱，可重複或以逗號分隔")
    parser.add_argument("--json", action="store_true", help="只在 stdout 輸出 JSON 報告")
    parser.add_argument("--verdicts", action="store_true", help="報告中包含每一個判決")


class _ArgumentParser(argparse.ArgumentParser):
    """用法錯誤以結束碼 1 離開；2 保留給已確認的反例"""

    def error(self, message: str):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _ArgumentParser(prog="homlab", description="分次模組的同調計算與定理驗證工作台")
    parser.add_argument("--version", action="version", version=f"homlab {HOMLAB_VERSION}")
    commands = parser.add_subparsers(dest="command", required=True)

    compute = commands.add_parser("compute", help="執行腳本檔")
    compute.add_argument("file", help="腳本路徑（- 代表 stdin）")
    _add_run_flags(compute)

    verify = commands.add_parser("verify", help="驗證一個敘述套件")
    verify.add_argument("--suite", required=True, help="套件名稱，all 代表全部")
    _add_run_flags(verify)

    search = commands.add_parser("search", help="搜尋單一敘述的反例")
    search.add_argument("--statement", required=True, help="敘述名稱")
    _add_run_flags(search)

    oracle = commands.add_parser("oracle-check", help="GB 引擎與判定器的 Ext 維數比對")
    oracle.add_argument("--upto", type=int, default=4, help="比對的最高 Ext 指標")
    _add_run_flags(oracle)
    return parser


def run_options(args: argparse.Namespace, config: AppConfig) -> RunOptionsDTO:
    rings = None
    if args.ring:
        rings = [name for value in args.ring for name in value.split(",") if name]
    return RunOptionsDTO(
        seed=args.seed if args.seed is not None else config.default_seed,
        samples=args.samples,
        jobs=args.jobs,
        oracle_mode=args.oracle,
        budget=args.budget,
        max_dim=args.max_dim,
        exhaustive=args.exhaustive,
        rings=rings,
    )


def load_script(args: argparse.Namespace) -> Script:
    """compute 讀腳本檔；其他子命令組成單一敘述的腳本"""
    if args.command == "compute":
        if args.file == "-":
            return parse_script(sys.stdin.read())
        with open(args.file, "r", encoding="utf-8") as f:
            return parse_script(f.read())
    if args.command == "verify":
        return Script((Verify(args.suite),))
    if args.command == "search":
        return Script((Search(args.statement),))
    return Script((OracleCheck((("upto", str(args.upto)),)),))


def main(
    argv: Optional[List[str]] = None,
    config: Optional[AppConfig] = None,
    container: Optional[Container] = None,
) -> int:
    """container 為 None 時以 config（或全域配置）建立新的容器"""
    args = build_parser().parse_args(argv)
    try:
        if container is None:
            container = build_container(config or get_config())
        config = container.get(AppConfig)
        handler = container.get(CommandHandler)
        builder = container.get(ReportBuilder)
        script = load_script(args)
        run = handler.run(script, run_options(args, config))
    except HomLabException as e:
        print(f"homlab: {e.message}", file=sys.stderr)
        return 1
    except OSError as e:
        print(f"homlab: 無法讀取 {args.file}: {e.strerror}", file=sys.stderr)
        return 1

    report = builder.build(run, include_verdicts=args.verdicts)
    if args.json:
        print(builder.dumps(report))
    else:
        print(TextReportRenderer().render(report))
    if run.error is not None:
        print(f"homlab: {run.error['message']}", file=sys.stderr)
    logger.debug("[CLI] 結束碼 %d", run.exit_code)
    return run.exit_code
