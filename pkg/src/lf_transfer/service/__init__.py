"""HTTP service wrapping the translation pipeline."""

from .app import create_app

__all__ = ["create_app"]
