"""Shared test helpers: fixture-file locations and loaders."""

from __future__ import annotations

from pathlib import Path

from axdesign import DesignSpec, parse_spec

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_path(name: str) -> Path:
    path = FIXTURES / name
    if not path.is_file():
        raise FileNotFoundError(f"missing fixture file: {path}")
    return path


def load_spec(name: str) -> DesignSpec:
    return parse_spec(fixture_path(name).read_text())
