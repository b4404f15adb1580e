from .engine import (BASE_DIMENSION, EmbedRequest, PathResult, base_case_solve, embed, embed_balanced,
                     embed_heavy_left, embed_path, hamiltonian_path, length_range, spectrum)

__all__ = [
    "BASE_DIMENSION", "EmbedRequest", "PathResult", "base_case_solve", "embed", "embed_balanced",
    "embed_heavy_left", "embed_path", "hamiltonian_path", "length_range", "spectrum",
]
