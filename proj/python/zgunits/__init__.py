"""Unit groups of integral group rings of finite abelian groups."""

from ._core import (
    Error,
    ayoub_rank,
    constructable_units,
    cyclotomic_units,
    decompose,
    hind,
    inverse,
    multiply,
    units,
)

__all__ = [
    "Error",
    "ayoub_rank",
    "constructable_units",
    "cyclotomic_units",
    "decompose",
    "hind",
    "inverse",
    "multiply",
    "units",
]
