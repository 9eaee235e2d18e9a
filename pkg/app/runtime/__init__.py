# app/runtime/__init__.py
# Import and expose from subpackages if needed
from .command_line import CommandLine


# Optional, for explicit API exposure
__all__ = ['CommandLine']
