# FILE: pfgr/dominance.py
# ==============================================================================
# Static dominance range-max index. Points carry integer coordinates and an
# integer value; a query returns the largest value among points whose every
# coordinate is >= the matching threshold.
#
# Layout: the last axis is a sorted key list with suffix maxima; every earlier
# axis is a segment tree over the points sorted on that axis, each segment
# holding an index on the remaining axes. Small segments are scanned directly.
# ==============================================================================
from bisect import bisect_left
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

from .exceptions import DimensionMismatchError

Point = Tuple[Tuple[int, ...], int]

LEAF_SIZE = 16


def satisfies(coords: Sequence[int], thresholds: Sequence[int], strict: Optional[Sequence[bool]] = None) -> bool:
    """True when coords[c] >= thresholds[c] (or > where strict[c]) for every axis."""
    if strict is None:
        return all(x >= t for x, t in zip(coords, thresholds))
    return all(x > t if s else x >= t for x, t, s in zip(coords, thresholds, strict))


def _scan_max(points: Sequence[Point], thresholds: Sequence[int], axis: int) -> Optional[int]:
    best = None
    tail = thresholds[axis:]
    for coords, value in points:
        if (best is None or value > best) and all(x >= t for x, t in zip(coords[axis:], tail)):
            best = value
    return best


def _better(a: Optional[int], b: Optional[int]) -> Optional[int]:
    if a is None:
        return b
    if b is None:
        return a
    return a if a >= b else b


class _Bucket:
    __slots__ = ("points", "axis")

    def __init__(self, points: List[Point], axis: int):
        self.points = points
        self.axis = axis

    def query(self, thresholds: Sequence[int]) -> Optional[int]:
        return _scan_max(self.points, thresholds, self.axis)


class _Top:
    """No axes left: every point qualifies."""

    __slots__ = ("best",)

    def __init__(self, points: List[Point]):
        self.best = max(value for _, value in points)

    def query(self, thresholds: Sequence[int]) -> Optional[int]:
        return self.best


class _Suffix:
    """Last axis: keys sorted ascending with the maximum value of every suffix."""

    __slots__ = ("keys", "suffix_max", "axis")

    def __init__(self, points: List[Point], axis: int):
        ordered = sorted(points, key=lambda p: p[0][axis])
        self.axis = axis
        self.keys = [coords[axis] for coords, _ in ordered]
        self.suffix_max = [0] * len(ordered)
        running = None
        for pos in range(len(ordered) - 1, -1, -1):
            running = _better(running, ordered[pos][1])
            self.suffix_max[pos] = running

    def query(self, thresholds: Sequence[int]) -> Optional[int]:
        pos = bisect_left(self.keys, thresholds[self.axis])
        return self.suffix_max[pos] if pos < len(self.keys) else None


@dataclass
class _Segment:
    lo: int
    hi: int
    inner: object
    left: Optional["_Segment"] = None
    right: Optional["_Segment"] = None


class _Layer:
    """Segment tree on one axis; a query's suffix of that axis is covered by O(log n) segments."""

    __slots__ = ("keys", "points", "axis", "root")

    def __init__(self, points: List[Point], axis: int, dimension: int):
        self.points = sorted(points, key=lambda p: p[0][axis])
        self.keys = [coords[axis] for coords, _ in self.points]
        self.axis = axis
        self.root = self._build(0, len(self.points), dimension)

    def _build(self, lo: int, hi: int, dimension: int) -> _Segment:
        segment = _Segment(lo, hi, _build(self.points[lo:hi], self.axis + 1, dimension))
        if hi - lo > LEAF_SIZE:
            mid = (lo + hi) // 2
            segment.left = self._build(lo, mid, dimension)
            segment.right = self._build(mid, hi, dimension)
        return segment

    def query(self, thresholds: Sequence[int]) -> Optional[int]:
        start = bisect_left(self.keys, thresholds[self.axis])
        best = None
        stack = [self.root]
        while stack:
            segment = stack.pop()
            if segment.hi <= start:
                continue
            if segment.lo >= start:
                best = _better(best, segment.inner.query(thresholds))
            elif segment.left is None:
                best = _better(best, _scan_max(self.points[start:segment.hi], thresholds, self.axis + 1))
            else:
                stack.append(segment.left)
                stack.append(segment.right)
        return best


def _build(points: List[Point], axis: int, dimension: int):
    if not points:
        return None
    if axis == dimension:
        return _Top(points)
    if len(points) <= LEAF_SIZE:
        return _Bucket(points, axis)
    if axis == dimension - 1:
        return _Suffix(points, axis)
    return _Layer(points, axis, dimension)


class DominanceIndex:
    """Immutable once built, so concurrent queries are safe."""

    def __init__(self, points: Sequence[Tuple[Sequence[int], int]], dimension: int):
        if dimension < 0:
            raise DimensionMismatchError(f"dimension must be nonnegative, got {dimension}")
        normalized: List[Point] = []
        for coords, value in points:
            coords = tuple(int(x) for x in coords)
            if len(coords) != dimension:
                raise DimensionMismatchError(f"point {coords} has {len(coords)} coordinates, index has {dimension}")
            normalized.append((coords, int(value)))
        self.dimension = dimension
        self.size = len(normalized)
        self._root = _build(normalized, 0, dimension)

    def __len__(self) -> int:
        return self.size

    def query(self, thresholds: Sequence[int]) -> Optional[int]:
        if self._root is None:
            return None
        return self._root.query(thresholds)


def dominance_max_query(
    index: DominanceIndex, thresholds: Sequence[int], strict: Optional[Sequence[bool]] = None
) -> Optional[int]:
    """Max value over points dominating `thresholds`; strict axes are answered as >= threshold + 1."""
    if len(thresholds) != index.dimension:
        raise DimensionMismatchError(f"query has {len(thresholds)} thresholds, index has dimension {index.dimension}")
    if strict is not None and len(strict) != index.dimension:
        raise DimensionMismatchError(f"strictness mask has {len(strict)} entries, index has dimension {index.dimension}")
    if strict is not None:
        thresholds = [t + 1 if s else t for t, s in zip(thresholds, strict)]
    return index.query(tuple(int(t) for t in thresholds))
