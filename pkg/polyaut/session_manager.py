"""
検証ワーカーのセッション管理

各ワーカーは worker.py のサブプロセスで、標準入出力の JSON Lines で
コマンドを受け取る。起動直後に init メッセージを返し、terminate で終了する。
"""
import hashlib
import json
import logging
import os
import platform
import subprocess
import sys
import threading
import uuid
from concurrent.futures import ThreadPoolExecutor
from datetime import datetime
from typing import Any, Dict, List, Optional, Sequence, Tuple

import psutil

from polyaut.config import RunConfig, root_dir
from polyaut.errors import WorkerCommandError
from polyaut.models import ClaimReport

logger = logging.getLogger(__name__)

WORKER_PATH = root_dir / "worker.py"


def resolve_workers(workers: int) -> int:
    """-1 は物理コア数 (取得できなければ論理コア数)"""
    if workers == -1:
        return psutil.cpu_count(logical=False) or psutil.cpu_count(logical=True) or 1
    return workers


def get_system_info() -> Dict[str, Any]:
    """ホストの情報を収集する (DEBUG ログ用)"""
    info: Dict[str, Any] = {
        "os": platform.system(),
        "os_release": platform.release(),
        "python": platform.python_version(),
    }
    memory = psutil.virtual_memory()
    info["memory_total"] = round(memory.total / (1024 * 1024))  # MB単位
    info["memory_percent"] = memory.percent
    info["cpu_count"] = psutil.cpu_count(logical=True)
    info["cpu_count_physical"] = psutil.cpu_count(logical=False)
    return info


class WorkerSession:
    """サブプロセスで群の解析をキャッシュしながら主張を検証するセッション"""
    def __init__(self, session_id: str, proc: subprocess.Popen, worker_pid: Optional[int] = None):
        self.session_id = session_id
        self.proc = proc
        self.worker_pid = worker_pid
        self.created_at = datetime.now()
        self.last_access = self.created_at
        self.commands = 0
        self._lock = threading.Lock()

    def send_command(self, command: dict) -> Any:
        """子プロセスに JSON コマンドを送信し、結果を返す"""
        with self._lock:
            self.last_access = datetime.now()
            self.commands += 1
            self.proc.stdin.write(json.dumps(command) + "\n")
            self.proc.stdin.flush()
            line = self.proc.stdout.readline()
        if not line:
            raise WorkerCommandError(f"ワーカー {self.session_id[:8]} が応答せずに終了しました")
        res = json.loads(line)
        if not res.get("success"):
            raise WorkerCommandError(
                res.get("error", "不明なエラー"),
                error_type=res.get("error_type", ""),
                exit_code=res.get("exit_code", 1),
            )
        return res.get("result")

    def cleanup(self) -> None:
        """子プロセスの終了処理"""
        try:
            self.proc.stdin.write(json.dumps({"type": "terminate"}) + "\n")
            self.proc.stdin.flush()
        except Exception:
            pass
        try:
            self.proc.wait(timeout=30)
        except subprocess.TimeoutExpired:
            try:
                # タイムアウト後は強制終了
                self.proc.terminate()
                self.proc.wait(timeout=5)
            except Exception:
                pass
        except Exception:
            pass


class SessionManager:
    def __init__(self, worker_path: Optional[str] = None):
        self.sessions: Dict[str, WorkerSession] = {}
        self.worker_path = str(worker_path or WORKER_PATH)

    def get_session(self, session_id: str) -> Optional[WorkerSession]:
        return self.sessions.get(session_id)

    def create_session(self, config: RunConfig) -> str:
        """新しいワーカーを起動し、init メッセージを確認する"""
        session_id = hashlib.sha256(uuid.uuid4().bytes).hexdigest()
        if not os.path.isfile(self.worker_path):
            raise WorkerCommandError(f"worker.py が見つかりません: {self.worker_path}", exit_code=2)
        cmd = [
            sys.executable, self.worker_path,
            "--id", session_id,
            "--config-json", config.model_dump_json(),
        ]
        proc = subprocess.Popen(cmd, stdin=subprocess.PIPE, stdout=subprocess.PIPE, text=True, encoding="utf-8")
        init_line = proc.stdout.readline()
        try:
            init_data = json.loads(init_line) if init_line else {}
        except json.JSONDecodeError:
            init_data = {"error": f"init メッセージを解釈できません: {init_line!r}"}
        if not init_data.get("success"):
            proc.kill()
            raise WorkerCommandError(f"ワーカー初期化失敗: {init_data.get('error')}", exit_code=2)
        self.sessions[session_id] = WorkerSession(session_id, proc, init_data.get("pid"))
        logger.debug(f"ワーカーを起動しました: {session_id[:8]} (pid={init_data.get('pid')})")
        return session_id

    def cleanup_session(self, session_id: str) -> None:
        session = self.sessions.pop(session_id, None)
        if session:
            session.cleanup()
            logger.debug(f"ワーカーを終了しました: {session_id[:8]}")

    def list_sessions(self) -> Dict[str, Dict[str, Any]]:
        return {
            session_id: {
                "id": session_id,
                "pid": session.worker_pid,
                "commands": session.commands,
                "created_at": session.created_at.isoformat(),
                "last_accessed": session.last_access.isoformat(),
            }
            for session_id, session in self.sessions.items()
        }

    def execute_command(self, session_id: str, command: str, params: Dict[str, Any]) -> Any:
        session = self.get_session(session_id)
        if not session:
            raise WorkerCommandError(f"セッション {session_id} が見つかりません")
        return session.send_command({"type": command, "params": params})

    def cleanup(self) -> None:
        for session_id in list(self.sessions.keys()):
            self.cleanup_session(session_id)

    def close_all_sessions(self) -> int:
        """全セッションを終了し、終了したセッション数を返す"""
        count = len(self.sessions)
        self.cleanup()
        return count

    def run_verification(
        self,
        groups: Sequence[str],
        claims: Sequence[str],
        config: RunConfig,
        workers: int,
    ) -> List[ClaimReport]:
        """群ごとにワーカーへ割り当てて検証し、群の順序どおりに結果を並べる

        1 つのワーカーに 1 つのスレッドを割り当て、担当する群を順に処理する。
        """
        workers = max(1, min(workers, len(groups)))
        session_ids = [self.create_session(config) for _ in range(workers)]
        assignments: Dict[str, List[Tuple[int, str]]] = {sid: [] for sid in session_ids}
        for position, group in enumerate(groups):
            assignments[session_ids[position % workers]].append((position, group))

        def drive(session_id: str) -> List[Tuple[int, List[Dict[str, Any]]]]:
            done = []
            for position, group in assignments[session_id]:
                result = self.execute_command(session_id, "verify", {"group": group, "claims": list(claims)})
                done.append((position, result))
            return done

        collected: Dict[int, List[Dict[str, Any]]] = {}
        try:
            with ThreadPoolExecutor(max_workers=workers) as pool:
                for done in pool.map(drive, session_ids):
                    collected.update(done)
        finally:
            for session_id in session_ids:
                self.cleanup_session(session_id)

        reports: List[ClaimReport] = []
        for position in range(len(groups)):
            reports.extend(ClaimReport.model_validate(item) for item in collected[position])
        return reports


_session_manager: Optional[SessionManager] = None


def init_session_manager(worker_path: Optional[str] = None) -> None:
    global _session_manager
    if _session_manager is None:
        _session_manager = SessionManager(worker_path)


def get_session_manager() -> SessionManager:
    if _session_manager is None:
        init_session_manager()
    return _session_manager


def cleanup_resources() -> None:
    """プログラム終了時に残っているワーカーを終了する"""
    if _session_manager is not None:
        try:
            count = _session_manager.close_all_sessions()
            if count:
                logger.info(f"{count} 個のワーカーを終了しました")
        except Exception:
            pass
