#!/usr/bin/env python3
"""
polyaut コマンドライン

    python main.py verify --group D16 --claims thm-1.1
    python main.py autgroup --group S3
    python main.py ia2poly --v "[a,b]" --w ""
    python main.py demo-rank3
    python main.py catalog list
"""
import argparse
import atexit
import logging
import signal
import sys
from typing import Any, Dict, List, Optional

from pydantic import ValidationError

from polyaut import __version__
from polyaut.commands import (
    cmd_autgroup,
    cmd_catalog_export,
    cmd_catalog_list,
    cmd_catalog_validate,
    cmd_closure,
    cmd_demo_rank3,
    cmd_fm_check,
    cmd_ia2poly,
    cmd_verify,
    emit,
)
from polyaut.config import RunConfig, load_config
from polyaut.errors import PolyautError, exit_code_for, get_detailed_error
from polyaut.log import configure_logger, release_logger
from polyaut.session_manager import cleanup_resources

logger = logging.getLogger("polyaut")


# キーボード割り込みとシグナル処理
def signal_handler(sig, frame):
    """シグナル処理"""
    logger.info(f"シグナル {sig} を受信しました。クリーンアップを実行します...")
    cleanup_resources()
    sys.exit(130)


def install_signal_handlers() -> None:
    signal.signal(signal.SIGINT, signal_handler)
    if hasattr(signal, 'SIGBREAK'):  # Windowsの場合
        signal.signal(signal.SIGBREAK, signal_handler)


def cleanup_app_resources() -> None:
    """終了時のクリーンアップ"""
    try:
        cleanup_resources()
        release_logger("polyaut")
    except Exception:
        pass


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="設定ファイル (key = value)")
    common.add_argument("--seed", type=int)
    common.add_argument("--output", help="出力先ファイル (省略時は標準出力)")
    common.add_argument("--workers", type=int, help="0: プロセス内, -1: コア数, N: ワーカー数")
    common.add_argument("--timing", action="store_true", default=None, help="elapsed_ms を記録する")
    common.add_argument("--closure-budget", type=int)
    common.add_argument("--closure-mode", choices=["chain", "explicit"])
    common.add_argument("--order-cap", type=int)
    common.add_argument("--search-budget", type=int, help="自己同型探索の候補数の上限")
    for flag in (
        "--lemma21-samples", "--en-samples", "--en-max-length", "--en-max-exponent",
        "--prop31-samples", "--hom-pairs", "--fm-samples", "--fm-word-length",
    ):
        common.add_argument(flag, type=int)
    common.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"])

    parser = argparse.ArgumentParser(prog="polyaut", description="多項式自己同型の計算と検証")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="主張を検証して JSON レポートを出力する")
    p.add_argument("--group", required=True, help="カタログ名・群ファイル・カンマ区切り・all")
    p.add_argument("--claims", default="all", help="主張ID のカンマ区切り (all で全件)")

    p = sub.add_parser("autgroup", parents=[common], help="|A(G)|, |I(G)|, |P(G)| と列のデータ")
    p.add_argument("--group", required=True)

    p = sub.add_parser("closure", parents=[common], help="多項式関数の閉包のサイズ")
    p.add_argument("--group", required=True)

    p = sub.add_parser("ia2poly", parents=[common], help="IA 自己同型を多項式形に書き直す")
    p.add_argument("--v", default="", help="f(a) = a v の v (語)")
    p.add_argument("--w", default="", help="f(b) = b w の w (語)")

    p = sub.add_parser("demo-rank3", parents=[common], help="ランク 3 の反例")
    p.add_argument("--json", action="store_true", help="レポートを JSON で出力する")

    p = sub.add_parser("fm-check", parents=[common], help="自由メタアーベル群の記号計算の検査")
    p.add_argument("--suites", default="all")

    catalog = sub.add_parser("catalog", help="群カタログの管理")
    catalog_sub = catalog.add_subparsers(dest="catalog_command", required=True)
    catalog_sub.add_parser("list", parents=[common], help="カタログの一覧")
    p = catalog_sub.add_parser("validate", parents=[common], help="群ファイルまたはカタログ全体の検証")
    p.add_argument("files", nargs="*")
    p = catalog_sub.add_parser("export", parents=[common], help="カタログを群ファイルとして書き出す")
    p.add_argument("directory")
    return parser


def config_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """コマンドラインで指定された値だけを設定に反映する"""
    mapping = {
        "seed": "seed",
        "output": "output",
        "workers": "workers",
        "timing": "record_timing",
        "closure_budget": "closure_budget",
        "closure_mode": "closure_mode",
        "order_cap": "order_cap",
        "search_budget": "search_budget",
        "lemma21_samples": "lemma21_samples",
        "en_samples": "en_samples",
        "en_max_length": "en_max_length",
        "en_max_exponent": "en_max_exponent",
        "prop31_samples": "prop31_samples",
        "hom_pairs": "hom_pairs",
        "fm_samples": "fm_samples",
        "fm_word_length": "fm_word_length",
        "log_level": "log_level",
    }
    return {key: getattr(args, attr) for attr, key in mapping.items() if getattr(args, attr, None) is not None}


def run(args: argparse.Namespace, config: RunConfig) -> int:
    """サブコマンドを実行して終了コードを返す"""
    if args.command == "verify":
        report = cmd_verify(args.group, args.claims, config)
        emit(report.to_json(), config.output)
        return 0 if report.passed else 1

    if args.command == "autgroup":
        emit(cmd_autgroup(args.group, config).model_dump_json(indent=2), config.output)
        return 0

    if args.command == "closure":
        emit(cmd_closure(args.group, config).model_dump_json(indent=2), config.output)
        return 0

    if args.command == "ia2poly":
        text, ok = cmd_ia2poly(args.v, args.w, config)
        emit(text, config.output)
        return 0 if ok else 1

    if args.command == "demo-rank3":
        text, report = cmd_demo_rank3(config)
        emit(report.model_dump_json(by_alias=True, indent=2) if args.json else text, config.output)
        return 0 if report.passed else 1

    if args.command == "fm-check":
        report = cmd_fm_check(args.suites, config)
        emit(report.to_json(), config.output)
        return 0 if report.passed else 1

    if args.command == "catalog":
        if args.catalog_command == "list":
            emit(cmd_catalog_list(config), config.output)
            return 0
        if args.catalog_command == "validate":
            text, ok = cmd_catalog_validate(args.files, config)
            emit(text, config.output)
            return 0 if ok else 5
        if args.catalog_command == "export":
            paths = cmd_catalog_export(args.directory, config)
            emit("\n".join(str(p) for p in paths), config.output)
            return 0

    raise ValueError(f"不明なコマンドです: {args.command}")


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)

    try:
        config = load_config(args.config, config_overrides(args))
    except (ValidationError, FileNotFoundError) as e:
        configure_logger("polyaut", logging.INFO, None)
        logger.error(f"設定が正しくありません: {e}")
        return 2

    configure_logger("polyaut", config.log_level.upper(), config.log_dir)
    logger.debug(f"polyaut {__version__}: {args.command} (seed={config.seed})")

    try:
        return run(args, config)
    except PolyautError as e:
        logger.error(get_detailed_error(e))
        return exit_code_for(e)
    except KeyboardInterrupt:
        logger.info("中断されました。クリーンアップを実行します...")
        cleanup_resources()
        return 130


if __name__ == "__main__":
    install_signal_handlers()
    # 終了時にクリーンアップを実行
    atexit.register(cleanup_app_resources)
    sys.exit(main())
