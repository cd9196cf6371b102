#!/usr/bin/env python3
"""Regenerate the bundled scenario files under src/mwconsensus/data/.

The builders in mwconsensus.scenarios are deterministic, so rerunning this
script reproduces the shipped JSON byte for byte.
"""

from pathlib import Path

from mwconsensus.config import write_config
from mwconsensus.scenarios import BUILTIN_BUILDERS

DATA_DIR = Path(__file__).resolve().parent.parent / "src" / "mwconsensus" / "data"


def main() -> None:
    DATA_DIR.mkdir(parents=True, exist_ok=True)
    for name, builder in BUILTIN_BUILDERS.items():
        path = DATA_DIR / f"{name}.json"
        write_config(builder(), path)
        print(f"wrote {path}")


if __name__ == "__main__":
    main()
