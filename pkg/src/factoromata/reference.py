"""Published reference values and the in-repo golden files."""

from __future__ import annotations

import json
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .algebra import Poly

GOLDEN_DIR = Path(str(resources.files("factoromata") / "golden"))


def _load(name: str) -> dict:
    with open(GOLDEN_DIR / name, encoding="utf-8") as fh:
        return json.load(fh)


@lru_cache(maxsize=None)
def published() -> dict:
    return _load("published.json")


def h_poly() -> Poly:
    """Minimal polynomial of the published M0 (degree 20)."""
    return Poly(published()["h_coefficients"])


def published_values(key: str) -> dict[int, int]:
    return {int(k): int(v) for k, v in published()[key].items()}


def published_constants(key: str) -> tuple[Fraction, ...]:
    return tuple(Fraction(x) for x in published()[key])


def load_golden(name: str) -> dict | None:
    path = GOLDEN_DIR / name
    if not path.exists():
        return None
    return _load(name)


def write_golden(name: str, data: dict, directory: Path | None = None) -> Path:
    path = (directory or GOLDEN_DIR) / name
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(data, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path
