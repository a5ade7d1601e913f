#!/usr/bin/env python
"""
セッションマネージャーのテストモジュール
"""
import os
import unittest

import pytest

from polyaut.analysis import GroupAnalysis
from polyaut.catalog import catalog_group
from polyaut.claims import verify_claims
from polyaut.config import RunConfig
from polyaut.errors import WorkerCommandError
from polyaut.models import ClaimReport
from polyaut.session_manager import SessionManager, WorkerSession, get_system_info, resolve_workers

TEST_CONFIG = dict(lemma21_samples=10, en_samples=40, log_dir="")


@pytest.mark.subprocess
class TestSessionManager(unittest.TestCase):
    def setUp(self):
        """テストの前準備"""
        self._saved_log_dir = os.environ.get("POLYAUT_LOG_DIR")
        os.environ["POLYAUT_LOG_DIR"] = ""
        self.manager = SessionManager()
        self.config = RunConfig(**TEST_CONFIG)

    def tearDown(self):
        """テスト後のクリーンアップ"""
        self.manager.cleanup()
        if self._saved_log_dir is None:
            os.environ.pop("POLYAUT_LOG_DIR", None)
        else:
            os.environ["POLYAUT_LOG_DIR"] = self._saved_log_dir

    def test_create_session(self):
        """新しいセッションの作成をテストする"""
        session_id = self.manager.create_session(self.config)
        self.assertIsNotNone(session_id)
        session = self.manager.get_session(session_id)
        self.assertIsInstance(session, WorkerSession)
        self.assertIsNotNone(session.worker_pid)

    def test_ping(self):
        """ping でワーカーの状態を取得する"""
        session_id = self.manager.create_session(self.config)
        result = self.manager.execute_command(session_id, "ping", {})
        self.assertEqual(result["pid"], self.manager.get_session(session_id).worker_pid)
        self.assertEqual(result["cached_groups"], [])

    def test_verify_matches_in_process(self):
        """ワーカーでの検証結果がプロセス内の結果と一致する"""
        session_id = self.manager.create_session(self.config)
        result = self.manager.execute_command(session_id, "verify", {"group": "D8", "claims": ["chain", "lem-2.1"]})
        expected = verify_claims(GroupAnalysis(catalog_group("D8"), self.config), ["chain", "lem-2.1"])
        self.assertEqual(
            [ClaimReport.model_validate(item).model_dump_json() for item in result],
            [r.model_dump_json() for r in expected],
        )
        ping = self.manager.execute_command(session_id, "ping", {})
        self.assertEqual(ping["cached_groups"], ["D8"])

    def test_worker_errors(self):
        """ワーカー内のエラーは終了コード付きで返る"""
        session_id = self.manager.create_session(self.config)
        with self.assertRaises(WorkerCommandError) as info:
            self.manager.execute_command(session_id, "verify", {"group": "Nope", "claims": ["chain"]})
        self.assertEqual(info.exception.error_type, "UnknownGroup")
        self.assertEqual(info.exception.exit_code, 2)
        with self.assertRaises(WorkerCommandError) as info:
            self.manager.execute_command(session_id, "no_such_command", {})
        self.assertEqual(info.exception.exit_code, 2)
        # エラーの後もセッションは使える
        self.assertIn("pid", self.manager.execute_command(session_id, "ping", {}))

    def test_unknown_session(self):
        with self.assertRaises(WorkerCommandError):
            self.manager.execute_command("missing", "ping", {})

    def test_list_sessions(self):
        """セッション一覧の取得をテストする"""
        session_id = self.manager.create_session(self.config)
        self.manager.execute_command(session_id, "ping", {})
        sessions = self.manager.list_sessions()
        self.assertIn(session_id, sessions)
        self.assertEqual(sessions[session_id]["commands"], 1)

    def test_close_all_sessions(self):
        for _ in range(2):
            self.manager.create_session(self.config)
        self.assertEqual(self.manager.close_all_sessions(), 2)
        self.assertEqual(self.manager.list_sessions(), {})

    def test_run_verification(self):
        """並列検証の結果が群の順序どおりでプロセス内と一致する"""
        groups = ["S3", "D8", "Q8", "C6"]
        claims = ["chain", "thm-1.1"]
        reports = self.manager.run_verification(groups, claims, self.config, workers=2)
        expected = []
        for name in groups:
            expected.extend(verify_claims(GroupAnalysis(catalog_group(name), self.config), claims))
        self.assertEqual([r.model_dump_json() for r in reports], [r.model_dump_json() for r in expected])
        self.assertEqual(self.manager.list_sessions(), {})

    def test_missing_worker_script(self):
        manager = SessionManager(worker_path="/nonexistent/worker.py")
        with self.assertRaises(WorkerCommandError):
            manager.create_session(self.config)


class TestSystemInfo(unittest.TestCase):
    def test_resolve_workers(self):
        self.assertGreaterEqual(resolve_workers(-1), 1)
        self.assertEqual(resolve_workers(0), 0)
        self.assertEqual(resolve_workers(3), 3)

    def test_system_info(self):
        info = get_system_info()
        for key in ("os", "python", "memory_total", "cpu_count"):
            self.assertIn(key, info)


if __name__ == '__main__':
    unittest.main()
