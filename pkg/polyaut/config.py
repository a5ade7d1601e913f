import os
import logging
from pathlib import Path
from typing import Any, Dict, Literal, Mapping, Optional

from dotenv import dotenv_values
from pydantic import field_validator
from pydantic_settings import BaseSettings, SettingsConfigDict

# ロガー設定
logger = logging.getLogger(__name__)

# リポジトリのルートディレクトリ
root_dir = Path(__file__).resolve().parent.parent

# 既定の設定ファイル (リポジトリに同梱)
DEFAULT_CONFIG_FILE = root_dir / "polyaut.conf"

# 設定ファイルのパスを指定する環境変数
CONFIG_ENV_VAR = "POLYAUT_CONFIG"

# レポートに埋め込まないプロセス専用のキー
PROCESS_ONLY_KEYS = {"workers", "output", "log_level", "log_dir"}


class RunConfig(BaseSettings):
    # 群の構築
    order_cap: int = 64

    # 閉包・探索の予算
    closure_budget: int = 200_000
    search_budget: int = 5_000_000
    closure_mode: Literal["chain", "explicit"] = "chain"

    # 乱数シードとサンプル数
    seed: int = 0
    lemma21_samples: int = 100
    en_samples: int = 500
    en_max_length: int = 3
    en_max_exponent: int = 3
    prop31_samples: int = 50
    hom_pairs: int = 20
    fm_samples: int = 1000
    fm_word_length: int = 8

    # 実行環境
    workers: int = 0
    record_timing: bool = False
    output: str = ""

    # ログ設定
    log_level: str = "INFO"
    log_dir: str = "logs"

    model_config = SettingsConfigDict(
        env_prefix="POLYAUT_",
        case_sensitive=False,
        extra="ignore",
    )

    @field_validator(
        "order_cap", "closure_budget", "search_budget", "lemma21_samples", "en_samples",
        "en_max_length", "en_max_exponent", "prop31_samples", "hom_pairs", "fm_samples",
        "fm_word_length",
    )
    @classmethod
    def _positive(cls, value: int) -> int:
        if value <= 0:
            raise ValueError("正の整数を指定してください")
        return value

    @field_validator("workers")
    @classmethod
    def _workers(cls, value: int) -> int:
        if value < -1:
            raise ValueError("workers は -1 (自動), 0 (プロセス内) または正の整数です")
        return value

    def echo(self) -> Dict[str, Any]:
        """レポートに埋め込む設定値 (ワーカー数などは除く)"""
        return self.model_dump(exclude=PROCESS_ONLY_KEYS)


def resolve_config_path(path: Optional[str] = None) -> Optional[Path]:
    """設定ファイルのパスを決定する: 引数 > 環境変数 > 同梱の既定ファイル"""
    if path:
        return Path(path)
    env_path = os.getenv(CONFIG_ENV_VAR)
    if env_path:
        return Path(env_path)
    if DEFAULT_CONFIG_FILE.exists():
        return DEFAULT_CONFIG_FILE
    return None


def read_config_file(path: Path) -> Dict[str, str]:
    """key = value 形式の設定ファイルを読み込む"""
    if not path.exists():
        raise FileNotFoundError(f"設定ファイルが見つかりません: {path}")
    values = dotenv_values(path)
    return {key.strip().lower(): value for key, value in values.items() if value is not None}


def load_config(path: Optional[str] = None, overrides: Optional[Mapping[str, Any]] = None) -> RunConfig:
    """設定を読み込む

    優先順位: コマンドライン > POLYAUT_* 環境変数 > 設定ファイル > 既定値
    """
    values: Dict[str, Any] = {}
    config_path = resolve_config_path(path)
    if config_path is not None:
        # 環境変数で指定されたキーはファイルの値で上書きしない
        values.update({
            key: value for key, value in read_config_file(config_path).items()
            if f"POLYAUT_{key.upper()}" not in os.environ
        })
        logger.debug(f"設定ファイルを読み込みました: {config_path}")
    else:
        logger.debug("設定ファイルが見つかりません。環境変数と既定値を使用します。")

    if overrides:
        values.update({key: value for key, value in overrides.items() if value is not None})

    settings = RunConfig(**values)
    logger.debug(
        f"設定: order_cap={settings.order_cap}, closure_budget={settings.closure_budget}, "
        f"closure_mode={settings.closure_mode}, seed={settings.seed}"
    )
    return settings
