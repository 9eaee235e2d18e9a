# app/models/__init__.py
from .singleton import SingletonMeta
from .command_line_args import CommandLineArgs
from .embedding import Embedding, EncodingMode
from .graph import AttributedGraph, Edge, Graph, HyperGraph
from .run_config import RunConfig

__all__ = [
    'SingletonMeta',
    'CommandLineArgs',
    'Embedding',
    'EncodingMode',
    'AttributedGraph',
    'Edge',
    'Graph',
    'HyperGraph',
    'RunConfig',
]
