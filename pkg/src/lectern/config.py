"""Service configuration: JSON file plus environment overrides.

Environment variables (all optional) override file values:

    LECTERN_DATA_ROOT, LECTERN_BIND, LECTERN_PORT, LECTERN_ADMIN_TOKEN,
    LECTERN_TOKEN_EXPIRY_HOURS, LECTERN_FETCH_TIMEOUT, LECTERN_OUTBOX,
    LECTERN_PUBLIC_BASE, LECTERN_UI_ROOT
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping

from .errors import ConfigError


@dataclass
class ServiceConfig:
    data_root: Path
    bind: str = "127.0.0.1"
    port: int = 8000
    admin_token: str = ""
    token_expiry_hours: float = 24.0
    fetch_timeout: float = 30.0
    outbox_path: Path | None = None
    public_base: str | None = None
    ui_root: Path | None = None

    def __post_init__(self) -> None:
        self.data_root = Path(self.data_root)
        if self.outbox_path is None:
            self.outbox_path = self.data_root / "outbox.log"
        if self.public_base is None:
            self.public_base = f"http://{self.bind}:{self.port}"

    def require_service(self) -> None:
        """Startup invariants for the HTTP service."""
        if not self.admin_token:
            raise ConfigError("admin token must be nonempty to run the service")
        self.data_root.mkdir(parents=True, exist_ok=True)
        probe = self.data_root / ".writable"
        try:
            probe.write_text("ok")
            probe.unlink()
        except OSError as exc:
            raise ConfigError(f"data root {self.data_root} is not writable: {exc}")


_ENV_KEYS = {
    "LECTERN_DATA_ROOT": ("data_root", Path),
    "LECTERN_BIND": ("bind", str),
    "LECTERN_PORT": ("port", int),
    "LECTERN_ADMIN_TOKEN": ("admin_token", str),
    "LECTERN_TOKEN_EXPIRY_HOURS": ("token_expiry_hours", float),
    "LECTERN_FETCH_TIMEOUT": ("fetch_timeout", float),
    "LECTERN_OUTBOX": ("outbox_path", Path),
    "LECTERN_PUBLIC_BASE": ("public_base", str),
    "LECTERN_UI_ROOT": ("ui_root", Path),
}

_FILE_KEYS = {
    "data_root": Path, "bind": str, "port": int, "admin_token": str,
    "token_expiry_hours": float, "fetch_timeout": float,
    "outbox_path": Path, "public_base": str, "ui_root": Path,
}


def load_config(path: Path | str | None = None,
                env: Mapping[str, str] = os.environ) -> ServiceConfig:
    values: dict = {}
    if path is not None:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except FileNotFoundError:
            raise ConfigError(f"config file {path} does not exist")
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config file {path} is not valid JSON: {exc}")
        for key, value in raw.items():
            if key not in _FILE_KEYS:
                raise ConfigError(f"unknown config key {key!r}")
            values[key] = _FILE_KEYS[key](value)
    for env_key, (key, cast) in _ENV_KEYS.items():
        if env_key in env:
            values[key] = cast(env[env_key])
    if "data_root" not in values:
        raise ConfigError(
            "data_root must be set (config file or LECTERN_DATA_ROOT)")
    return ServiceConfig(**values)
