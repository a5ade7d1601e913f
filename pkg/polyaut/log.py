import logging
import os
import sys

LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def configure_logger(name: str = "polyaut", level: str | int = logging.INFO, log_dir: str | None = "logs") -> logging.Logger:
    """ロガー設定 - ファイルハンドラと標準エラーのコンソールハンドラを追加する

    標準出力はレポート専用なので、コンソールハンドラは stderr に出す。
    既にハンドラがある場合は追加しない。
    """
    lgr = logging.getLogger(name)
    lgr.setLevel(level)

    if lgr.handlers:
        lgr.debug(f"既存のロガーハンドラが存在するため新しいハンドラは追加しません: {len(lgr.handlers)}個")
        return lgr

    formatter = logging.Formatter(LOG_FORMAT)
    try:
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
            file_handler = logging.FileHandler(
                os.path.join(log_dir, f'{name}.log'),
                encoding='utf-8',
                mode='a'
            )
            file_handler.setFormatter(formatter)
            lgr.addHandler(file_handler)
    except OSError as e:
        # ログディレクトリが作れなくても処理は続ける
        print(f"Logger configuration error: {e}", file=sys.stderr)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    lgr.addHandler(console_handler)
    return lgr


def release_logger(name: str = "polyaut") -> None:
    """ロガーハンドラのクリーンアップ"""
    lgr = logging.getLogger(name)
    for handler in lgr.handlers[:]:
        try:
            handler.close()
            lgr.removeHandler(handler)
        except Exception:
            pass
