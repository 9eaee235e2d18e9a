from typing import Optional

from pydantic import BaseModel, ConfigDict, Field, field_validator


class RunConfig(BaseModel):
    """
    Fully resolved configuration of one CLI invocation.

    Built by the Host from CommandLineArgs layered over Config, logged on start
    and echoed in every JSON output.
    """

    model_config = ConfigDict(frozen=True, extra="forbid")

    command: str
    action: Optional[str] = None
    d: int = Field(ge=2)
    seed: int
    max_nodes: int = Field(ge=1)
    max_edges: int = Field(ge=0)
    unitary: bool = False
    threshold: float | str = 0.5
    inverse_floor: float = Field(gt=0)
    workers: int = Field(ge=1)
    codebook_path: Optional[str] = None
    input_path: Optional[str] = None
    output_path: Optional[str] = None
    csv_path: Optional[str] = None

    @field_validator("threshold")
    @classmethod
    def _check_threshold(cls, value):
        if isinstance(value, str):
            if value == "auto":
                return value
            try:
                return float(value)
            except ValueError:
                raise ValueError("threshold must be a number or 'auto'")
        return float(value)
