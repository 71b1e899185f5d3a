"""Main application package."""

__all__ = ["create_app"]
from .app import create_app
