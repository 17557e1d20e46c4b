"""Command-line orchestration: builds, stage iteration, analyses, verification."""

from .main import main

__all__ = ["main"]
