from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, conlist


class GraphDocument(BaseModel):
    """Graph JSON: {"n": int, "edges": [[i, j], ...], "attrs": [key, ...]}."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    edges: list[conlist(int, min_length=2, max_length=2)] = Field(default_factory=list)
    attrs: Optional[list[str]] = None


class HypergraphDocument(BaseModel):
    """Hypergraph JSON: {"n": int, "hyperedges": [[v, ...], ...]}."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(ge=1)
    hyperedges: list[conlist(int, min_length=1)] = Field(default_factory=list)
