import logging
from functools import lru_cache

import pytest
from hypothesis import HealthCheck, settings

from polyaut.analysis import GroupAnalysis
from polyaut.catalog import catalog_group
from polyaut.config import RunConfig
from polyaut.log import release_logger

# テスト用のロガー設定
logging.basicConfig(level=logging.INFO)
logger = logging.getLogger(__name__)

# 記号計算の性質テストは乱数を固定する
settings.register_profile(
    "polyaut",
    derandomize=True,
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("polyaut")

# 検証を軽くしたサンプル数
TEST_OVERRIDES = dict(
    lemma21_samples=20,
    en_samples=60,
    prop31_samples=4,
    hom_pairs=5,
    fm_samples=25,
    fm_word_length=5,
    log_dir="",
)


@lru_cache(maxsize=None)
def _catalog_group(name: str):
    return catalog_group(name)


@pytest.fixture(autouse=True)
def isolated_env(monkeypatch):
    """環境変数の設定ファイル指定を外し、ログファイルを作らない"""
    monkeypatch.delenv("POLYAUT_CONFIG", raising=False)
    monkeypatch.setenv("POLYAUT_LOG_DIR", "")
    yield
    release_logger("polyaut")


@pytest.fixture
def config():
    """
    テスト用の設定
    """
    return RunConfig(**TEST_OVERRIDES)


@pytest.fixture
def group():
    """カタログ名から群を返す (テスト間でキャッシュする)"""
    return _catalog_group


@pytest.fixture
def analysis(config):
    """カタログ名から GroupAnalysis を作る"""
    def make(name: str) -> GroupAnalysis:
        return GroupAnalysis(_catalog_group(name), config)
    return make
