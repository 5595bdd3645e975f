"""A two-dimensional strong-uniform partition that is not a tensor product.

The shape is the mean of two pyramids: ``f1`` with square level sets and
``f2`` with diamond level sets.  Along the coordinate axes it coincides with
the product triangular shape; off the axes the two differ.
"""

from __future__ import annotations

from typing import Sequence

import numpy as np

from .errors import DimensionMismatch
from .partition1d import Axis
from .tensor import GridPartition


def _xy(offset):
    arr = np.asarray(offset, dtype=float)
    if arr.shape[-1:] != (2,):
        raise DimensionMismatch(f"expected 2-D offsets, got shape {arr.shape}")
    return arr[..., 0], arr[..., 1], arr.ndim == 1


def _out(val, single):
    return float(val) if single else val


def variant_f1(offset):
    x, y, single = _xy(offset)
    return _out(np.maximum(0.0, np.minimum(1.0 - np.abs(x), 1.0 - np.abs(y))), single)


def variant_f2(offset):
    x, y, single = _xy(offset)
    return _out(np.maximum(0.0, np.minimum(1.0 - np.abs(x - y), 1.0 - np.abs(x + y))), single)


def variant_mu(offset):
    """Normalized variant shape ``(f1 + f2) / 2`` at 2-D offsets in spacing units."""
    x, y, single = _xy(offset)
    f1 = np.maximum(0.0, np.minimum(1.0 - np.abs(x), 1.0 - np.abs(y)))
    f2 = np.maximum(0.0, np.minimum(1.0 - np.abs(x - y), 1.0 - np.abs(x + y)))
    return _out(0.5 * (f1 + f2), single)


def variant_partition(axes: Sequence[Axis]) -> GridPartition:
    axes = tuple(axes)
    if len(axes) != 2:
        raise DimensionMismatch(f"the variant partition is two-dimensional, got {len(axes)} axes")
    return GridPartition(axes, variant_mu, name="variant")
