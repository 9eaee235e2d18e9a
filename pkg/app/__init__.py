# app/__init__.py
from .runtime import CommandLine
from .config import Config

__all__ = ['CommandLine', 'Config']
