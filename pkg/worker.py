#!/usr/bin/env python3
"""検証ワーカー: 標準入出力の JSON Lines でコマンドを処理する"""
import argparse
import json
import os
import sys

try:
    from polyaut.analysis import group_analysis
    from polyaut.catalog import resolve_group
    from polyaut.claims import verify_claims
    from polyaut.config import RunConfig
    from polyaut.errors import error_payload
    from polyaut.log import configure_logger
except Exception as e:
    # インポートに失敗したら親プロセスへエラーを通知して終了
    print(json.dumps({"type": "init", "success": False, "error": f"import error: {e}"}), flush=True)
    sys.exit(1)


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--id", required=True)
    parser.add_argument("--config-json", required=True)
    args = parser.parse_args()

    config = RunConfig(**json.loads(args.config_json))
    logger = configure_logger("polyaut", config.log_level.upper(), config.log_dir)
    logger.debug(f"ワーカー {args.id[:8]} を起動しました (pid={os.getpid()})")

    # 群ごとの解析結果をキャッシュする
    analyses = {}

    in_stream = sys.stdin
    out_stream = sys.stdout
    out_stream.write(json.dumps({"type": "init", "success": True, "error": None, "pid": os.getpid()}) + "\n")
    out_stream.flush()

    while True:
        line = in_stream.readline()
        if not line:  # EOF
            break
        try:
            req = json.loads(line)
        except json.JSONDecodeError as e:
            out_stream.write(json.dumps({"success": False, "error": f"JSONデコードエラー: {e}", "exit_code": 2}) + "\n")
            out_stream.flush()
            continue

        cmd_type = req.get("type")
        if cmd_type == "terminate":
            break
        params = req.get("params", {})
        res = {"type": cmd_type}
        try:
            if cmd_type == "verify":
                name = params["group"]
                if name not in analyses:
                    analyses[name] = group_analysis(resolve_group(name, order_cap=config.order_cap), config)
                reports = verify_claims(analyses[name], params.get("claims", "all"))
                res.update({"success": True, "result": [r.model_dump(by_alias=True) for r in reports]})
            elif cmd_type == "ping":
                res.update({"success": True, "result": {"pid": os.getpid(), "cached_groups": sorted(analyses)}})
            else:
                res.update({"success": False, "error": f"不明なコマンド: {cmd_type}", "exit_code": 2})
        except Exception as e:
            logger.debug(f"コマンド {cmd_type} でエラー: {e}")
            res.update({"success": False, **error_payload(e)})

        out_stream.write(json.dumps(res) + "\n")
        out_stream.flush()

    logger.debug(f"ワーカー {args.id[:8]} を終了します")


if __name__ == "__main__":
    try:
        main()
    except Exception as e:
        # 予期せぬ例外を親プロセスへ通知
        print(json.dumps({"type": "init", "success": False, "error": str(e)}), flush=True)
        sys.exit(1)
