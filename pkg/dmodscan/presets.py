from __future__ import annotations

from typing import Dict, List, Tuple

from .errors import ContentError
from .susy import FieldContent

PRESETS: Dict[str, Tuple[int, ...]] = {
    **{f"n8d{d}": (d, 8, 8 - d) for d in range(9)},
    **{f"n4d{d}": (d, 4, 4 - d) for d in range(5)},
    "n7": (1, 7, 7, 1),
    "root1": (1, 1),
    "root2": (2, 2),
}


def list_presets() -> List[str]:
    return sorted(PRESETS.keys())


def describe_presets() -> List[str]:
    return [f"{name:<6} {FieldContent(PRESETS[name]).label}" for name in list_presets()]


def resolve_content(text: str) -> FieldContent:
    """Preset name, ``"D,N"`` shorthand or a full tuple like ``"(1,7,7,1)"``."""
    key = (text or "").strip().lower()
    if not key:
        raise ContentError("empty field content")
    if key in PRESETS:
        return FieldContent(PRESETS[key])
    return FieldContent.parse(key)
