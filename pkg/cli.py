"""Shim de compatibilidad: delega `python cli.py` a `app.cli`.

La implementación canónica vive en `app/cli.py` (también instalada como `mseps`).
"""

from __future__ import annotations

import importlib
import sys
from typing import Any


def main(argv: list[str] | None = None) -> Any:
    mod = importlib.import_module("app.cli")
    if hasattr(mod, "main"):
        return mod.main(argv)
    raise RuntimeError("Modulo 'app.cli' no tiene entrypoint 'main'")


if __name__ == "__main__":
    sys.exit(main() or 0)
