"""Inverse sequences of cellular graphs, their limits and maps."""

from ._cellstruct import (
    CellstructError,
    Structure,
    generate,
    generator_names,
    load,
    loads,
    run_cli,
)

__all__ = [
    "CellstructError",
    "Structure",
    "generate",
    "generator_names",
    "load",
    "loads",
    "run_cli",
]
