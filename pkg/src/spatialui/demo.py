"""Accessors for the bundled demo dataset, script, and golden trace."""

from __future__ import annotations

from importlib import resources


def _read(name: str) -> str:
    return resources.files("spatialui").joinpath("data", name).read_text(encoding="utf-8")


def demo_chargers_csv() -> str:
    return _read("demo_chargers.csv")


def demo_rules_json() -> str:
    return _read("demo_rules.json")


def demo_script_text() -> str:
    return _read("demo_script.jsonl")


def golden_trace_text() -> str:
    return _read("golden_trace.jsonl")


def sample_scan_ply() -> str:
    return _read("sample_scan.ply")
