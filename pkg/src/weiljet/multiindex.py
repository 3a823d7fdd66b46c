"""Multi-index bookkeeping: exponent tuples, their norm and factorial, the
componentwise partial order, and the two enumeration sets used by truncated
Taylor expansions (the box {alpha <= k} and the simplex {|alpha| <= N}).

A multi-index is a plain tuple of naturals. Enumeration order is fixed so
that tables and serialized output are reproducible byte for byte:

* ``enumerate_box`` is colexicographic, i.e. increasing mixed-radix index
  ``idx(alpha) = sum_i alpha_i * prod_{j<i} (k_j + 1)`` with the first
  component as the least significant digit.
* ``enumerate_simplex`` is graded by total degree, colexicographic within
  each degree.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Iterator

from .errors import WeiljetError

MultiIndex = tuple[int, ...]


class ArityMismatchError(WeiljetError):
    """Two multi-indices (or an index and a point) have different lengths."""


def as_multiindex(parts) -> MultiIndex:
    """Validate and normalize an iterable of naturals into a MultiIndex."""
    alpha = tuple(int(p) for p in parts)
    for p in alpha:
        if p < 0:
            raise ValueError(f"multi-index entries must be naturals, got {alpha}")
    return alpha


def norm(alpha: MultiIndex) -> int:
    """Total degree |alpha|, the sum of the entries."""
    return sum(alpha)


def factorial(alpha: MultiIndex) -> int:
    """alpha!, the product of entrywise factorials (1 for the empty index)."""
    out = 1
    for p in alpha:
        out *= math.factorial(p)
    return out


def leq(alpha: MultiIndex, beta: MultiIndex) -> bool:
    """Componentwise order: alpha <= beta iff alpha_i <= beta_i for all i."""
    if len(alpha) != len(beta):
        raise ArityMismatchError(
            f"cannot compare multi-indices of lengths {len(alpha)} and {len(beta)}"
        )
    return all(a <= b for a, b in zip(alpha, beta))


@lru_cache(maxsize=None)
def enumerate_box(k: MultiIndex) -> tuple[MultiIndex, ...]:
    """All alpha <= k in colexicographic order; length prod_i (k_i + 1).

    Arity 0 yields the single empty index.
    """
    k = as_multiindex(k)
    if not k:
        return ((),)
    total = 1
    for ki in k:
        total *= ki + 1
    out = []
    for code in range(total):
        alpha = []
        for ki in k:
            code, digit = divmod(code, ki + 1)
            alpha.append(digit)
        out.append(tuple(alpha))
    return tuple(out)


def box_index(k: MultiIndex, alpha: MultiIndex) -> int:
    """Position of alpha in enumerate_box(k): the mixed-radix encoding."""
    idx = 0
    stride = 1
    for ai, ki in zip(alpha, k):
        idx += ai * stride
        stride *= ki + 1
    return idx


def _compositions(n: int, total: int) -> Iterator[MultiIndex]:
    # All alpha in N^n with |alpha| == total, colexicographic.
    if n == 0:
        if total == 0:
            yield ()
        return
    if n == 1:
        yield (total,)
        return
    for rest in range(total + 1):
        for tail in _compositions(n - 1, rest):
            yield (total - rest,) + tail


@lru_cache(maxsize=None)
def enumerate_simplex(n: int, bound: int) -> tuple[MultiIndex, ...]:
    """All alpha in N^n with |alpha| <= bound, graded by degree then colex.

    Length is C(bound + n, n).
    """
    out = []
    for total in range(bound + 1):
        out.extend(_compositions(n, total))
        if n == 0:
            break
    return tuple(out)
