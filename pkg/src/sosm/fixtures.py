"""Bundled example models."""

from __future__ import annotations

from pathlib import Path

from .model import SosModel
from .parser import parse_model


def efs_path() -> Path:
    """Path of the bundled emergency-firefighting scenario file."""
    return Path(__file__).parent / "data" / "efs.sosm"


def load_efs() -> SosModel:
    return parse_model(efs_path().read_text(encoding="utf-8"))
