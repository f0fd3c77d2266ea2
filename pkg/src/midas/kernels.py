"""Kernel backend selection and packed-buffer helpers.

The compiled extension is preferred when present; the pure-Python twin is
the fallback. Set MIDAS_PURE_PYTHON=1 to force the fallback (used by the
benchmark and by tests that exercise both backends).
"""
from __future__ import annotations

import os
from array import array
from typing import Sequence

from .corpus import Publication

if os.environ.get("MIDAS_PURE_PYTHON") == "1":
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

amt_hit_count = _impl.amt_hit_count
grid_hit_counts = _impl.grid_hit_counts


def backend_name() -> str:
    return BACKEND


class PackedPublications:
    """Int64 buffers for one researcher's publications, kernel-ready."""

    __slots__ = ("years", "flat", "offs", "lens", "n")

    def __init__(self, publications: Sequence[Publication]):
        years = array("q")
        flat = array("q")
        offs = array("q")
        lens = array("q")
        off = 0
        for p in publications:
            years.append(p.year)
            offs.append(off)
            lens.append(len(p.citation_series))
            flat.extend(p.citation_series)
            off += len(p.citation_series)
        self.years = years
        self.flat = flat
        self.offs = offs
        self.lens = lens
        self.n = len(publications)


def int_buffer(values: Sequence[int]) -> array:
    return array("q", values)


def zero_buffer(size: int) -> array:
    return array("q", bytes(8 * size))
