from dataclasses import dataclass
from enum import Enum

import numpy as np


class EncodingMode(str, Enum):
    GRAPH = "graph"
    ATTRIBUTED = "attributed"
    HYPER_PRODUCT = "hyper_product"
    HYPER_KEYED = "hyper_keyed"
    NEIGHBORHOOD = "neighborhood"
    KV_BUNDLE = "kv_bundle"

    @property
    def code(self) -> int:
        # Stable on-disk identifier
        return list(EncodingMode).index(self)

    @classmethod
    def from_code(cls, code: int) -> "EncodingMode":
        modes = list(cls)
        if not 0 <= code < len(modes):
            raise ValueError(f"Unknown encoding mode code {code}.")
        return modes[code]


@dataclass(frozen=True)
class Embedding:
    """
    An encoded structure: the vector g plus the metadata needed to decode it.

    Attributes:
    - vector: the d-dimensional float64 embedding.
    - mode: which encoding produced it.
    - codebook_fingerprint: hex digest of the codebook used.
    - n_declared: vertex count written into the size term.
    """

    vector: np.ndarray
    mode: EncodingMode
    codebook_fingerprint: str
    n_declared: int

    @property
    def d(self) -> int:
        return int(self.vector.shape[0])
