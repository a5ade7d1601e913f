"""
設定の読み込みのテスト
"""
import logging

import pytest
from pydantic import ValidationError

from polyaut.config import DEFAULT_CONFIG_FILE, PROCESS_ONLY_KEYS, RunConfig, load_config, resolve_config_path
from polyaut.errors import ClosureBudgetExceeded, UnknownGroup, WorkerCommandError, error_payload, exit_code_for
from polyaut.log import configure_logger, release_logger


class TestLoadConfig:
    def test_defaults_file(self):
        assert resolve_config_path() == DEFAULT_CONFIG_FILE
        config = load_config()
        assert config.order_cap == 64
        assert config.closure_mode == "chain"
        assert config.log_dir == ""

    def test_precedence(self, tmp_path, monkeypatch):
        """コマンドライン > 環境変数 > 設定ファイル > 既定値"""
        path = tmp_path / "run.conf"
        path.write_text("seed = 5\nhom_pairs = 7\nfm_samples = 9\n", encoding="utf-8")
        monkeypatch.setenv("POLYAUT_HOM_PAIRS", "11")
        monkeypatch.setenv("POLYAUT_FM_SAMPLES", "13")
        config = load_config(str(path), {"fm_samples": 17, "seed": None})
        assert config.seed == 5
        assert config.hom_pairs == 11
        assert config.fm_samples == 17
        assert config.en_samples == 500

    def test_env_config_path(self, tmp_path, monkeypatch):
        path = tmp_path / "env.conf"
        path.write_text("closure_mode = explicit\n", encoding="utf-8")
        monkeypatch.setenv("POLYAUT_CONFIG", str(path))
        assert load_config().closure_mode == "explicit"

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(str(tmp_path / "none.conf"))

    @pytest.mark.parametrize("key, value", [
        ("order_cap", 0), ("closure_budget", -1), ("workers", -2), ("closure_mode", "lazy"),
    ])
    def test_invalid_values(self, key, value):
        with pytest.raises(ValidationError):
            RunConfig(**{key: value})

    def test_echo_excludes_process_keys(self):
        echo = RunConfig(workers=4, output="x.json").echo()
        assert not PROCESS_ONLY_KEYS & set(echo)
        assert echo["seed"] == 0


class TestErrors:
    def test_exit_codes(self):
        assert exit_code_for(UnknownGroup("X")) == 2
        assert exit_code_for(ClosureBudgetExceeded(10, 5)) == 3
        assert exit_code_for(WorkerCommandError("boom", exit_code=4)) == 4
        assert exit_code_for(RuntimeError("boom")) == 1

    def test_payload(self):
        payload = error_payload(UnknownGroup("X"))
        assert payload["error_type"] == "UnknownGroup"
        assert payload["exit_code"] == 2
        assert "X" in payload["error"]


class TestLogger:
    def test_file_handler(self, tmp_path):
        lgr = configure_logger("polyaut-test", logging.DEBUG, str(tmp_path / "logs"))
        try:
            assert len(lgr.handlers) == 2
            assert configure_logger("polyaut-test", logging.DEBUG, str(tmp_path)) is lgr
            assert len(lgr.handlers) == 2
            lgr.info("hello")
            assert (tmp_path / "logs" / "polyaut-test.log").exists()
        finally:
            release_logger("polyaut-test")
        assert logging.getLogger("polyaut-test").handlers == []
