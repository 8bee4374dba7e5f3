from __future__ import annotations

import pytest

from dmodscan.errors import ContentError
from dmodscan.presets import PRESETS, describe_presets, list_presets, resolve_content


@pytest.mark.parametrize(
    "text, counts",
    [("n8d1", (1, 8, 7)), ("N7", (1, 7, 7, 1)), (" root2 ", (2, 2)), ("n4d4", (4, 4, 0)), ("1,8", (1, 8, 7))],
)
def test_resolve_content(text, counts):
    assert resolve_content(text).counts == counts


@pytest.mark.parametrize("text", ["", "   ", "n9", "n8d9"])
def test_resolve_content_errors(text):
    with pytest.raises(ContentError):
        resolve_content(text)


def test_presets_are_valid_contents():
    assert len(PRESETS) == 17
    assert {n for n in PRESETS if n.startswith("n8d")} == {f"n8d{d}" for d in range(9)}
    assert {n for n in PRESETS if n.startswith("n4d")} == {f"n4d{d}" for d in range(5)}
    assert list_presets() == sorted(PRESETS)
    for name in list_presets():
        resolve_content(name)


def test_describe_presets():
    lines = describe_presets()
    assert lines[0] == "n4d0   (0,4,4)"
    assert "n7     (1,7,7,1)" in lines
