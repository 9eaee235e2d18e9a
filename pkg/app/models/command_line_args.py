from dataclasses import dataclass, field
from typing import Optional


@dataclass
class CommandLineArgs:
    """Raw values parsed from the command line; None means 'use Config'."""

    command: str
    action: Optional[str] = None
    d: Optional[int] = None
    seed: Optional[int] = None
    nodes: Optional[int] = None
    edges: Optional[int] = None
    unitary: Optional[bool] = None
    attrs: list[str] = field(default_factory=list)
    input_path: Optional[str] = None
    codebook_path: Optional[str] = None
    output_path: Optional[str] = None
    csv_path: Optional[str] = None
    key_column: str = "key"
    vertex: Optional[int] = None
    vertices: list[int] = field(default_factory=list)
    relabel: bool = False
    threshold: Optional[str] = None
    n_values: list[int] = field(default_factory=list)
    trials: int = 20
    task: Optional[str] = None
    family: Optional[str] = None
    n_min: Optional[int] = None
    n_max: Optional[int] = None
    size: int = 2000
    model: str = "ridge"
    ridge_lambda: float = 1e-3
    hidden: int = 16
    epochs: int = 1000
    lr: float = 1e-3
    dims: list[int] = field(default_factory=list)
    workers: Optional[int] = None
