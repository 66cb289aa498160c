"""Bundled JSON fixtures (data, fans and toric pairs)."""

from __future__ import annotations

import json
from importlib import resources

NAMES = ("hopf4", "badimb", "simplex3", "p2fan", "prism_fan", "prism_datum", "hopf4_toric")


def raw(name: str) -> dict:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; choose from {', '.join(NAMES)}")
    text = resources.files(__package__).joinpath("fixtures", f"{name}.json").read_text("utf-8")
    return json.loads(text)


def path(name: str) -> str:
    raw(name)
    return str(resources.files(__package__).joinpath("fixtures", f"{name}.json"))
