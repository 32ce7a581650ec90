"""Quantized gray-level images on a rectangular pixel lattice.

Pixels live on a ``width`` x ``height`` grid, stored flat in row-major order
(pixel ``i`` sits at row ``i // width``, column ``i % width``).  Labels are
integers ``0 .. q-1``.  The lattice uses the 4-neighborhood with free
boundaries: border pixels simply have fewer neighbors, there is no wrap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True, eq=False)
class GrayImage:
    """An immutable labeled image.

    :param width: number of columns, at least 1.
    :param height: number of rows, at least 1.
    :param q: number of gray levels, at least 2.
    :param labels: flat row-major label array, values in ``[0, q-1]``.
    """

    width: int
    height: int
    q: int
    labels: np.ndarray

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"image dimensions must be positive, got {self.width}x{self.height}")
        if self.q < 2:
            raise ValueError(f"need at least 2 gray levels, got q={self.q}")
        arr = np.asarray(self.labels)
        if arr.ndim != 1 or arr.shape[0] != self.width * self.height:
            raise ValueError(
                f"label array has shape {arr.shape}, expected ({self.width * self.height},)"
            )
        if not np.issubdtype(arr.dtype, np.integer):
            raise ValueError(f"labels must be integers, got dtype {arr.dtype}")
        arr = np.ascontiguousarray(arr, dtype=np.int64).copy()
        if arr.size and (arr.min() < 0 or arr.max() >= self.q):
            raise ValueError(
                f"labels must lie in [0, {self.q - 1}], got range [{arr.min()}, {arr.max()}]"
            )
        arr.setflags(write=False)
        object.__setattr__(self, "labels", arr)

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    def grid(self) -> np.ndarray:
        """Return the labels as a read-only ``(height, width)`` view."""
        return self.labels.reshape(self.height, self.width)

    @classmethod
    def from_grid(cls, grid: np.ndarray, q: int) -> "GrayImage":
        """Build an image from a 2-D ``(height, width)`` label array."""
        grid = np.asarray(grid)
        if grid.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {grid.shape}")
        return cls(width=grid.shape[1], height=grid.shape[0], q=q, labels=grid.reshape(-1))

    def with_labels(self, labels: np.ndarray) -> "GrayImage":
        """Return a copy of this image carrying ``labels`` instead."""
        return GrayImage(self.width, self.height, self.q, labels)

    def same_shape(self, other: "GrayImage") -> bool:
        return (
            self.width == other.width
            and self.height == other.height
            and self.q == other.q
        )

    def __eq__(self, other):
        if not isinstance(other, GrayImage):
            return NotImplemented
        return self.same_shape(other) and bool(np.array_equal(self.labels, other.labels))


@dataclass(frozen=True, eq=False)
class Topology:
    """Neighbor and edge structure of the 4-connected lattice.

    Edges are enumerated in a fixed canonical order: all horizontal edges in
    row-major order first, then all vertical edges in row-major order.  Bond
    fields and cluster routines index edges by this order.
    """

    width: int
    height: int
    neighbor_table: np.ndarray = field(init=False, repr=False)
    edge_u: np.ndarray = field(init=False, repr=False)
    edge_v: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.width < 1 or self.height < 1:
            raise ValueError(f"lattice dimensions must be positive, got {self.width}x{self.height}")
        w, h = self.width, self.height
        n = w * h
        idx = np.arange(n, dtype=np.int64)
        row, col = idx // w, idx % w
        # Neighbor slots: left, right, up, down; -1 marks a missing neighbor.
        table = np.full((n, 4), -1, dtype=np.int64)
        table[col > 0, 0] = idx[col > 0] - 1
        table[col < w - 1, 1] = idx[col < w - 1] + 1
        table[row > 0, 2] = idx[row > 0] - w
        table[row < h - 1, 3] = idx[row < h - 1] + w
        hor = idx[col < w - 1]
        ver = idx[row < h - 1]
        edge_u = np.concatenate([hor, ver])
        edge_v = np.concatenate([hor + 1, ver + w])
        for name, arr in (("neighbor_table", table), ("edge_u", edge_u), ("edge_v", edge_v)):
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)

    @property
    def n_pixels(self) -> int:
        return self.width * self.height

    @property
    def n_edges(self) -> int:
        return 2 * self.width * self.height - self.width - self.height

    def neighbors(self, i: int) -> list[int]:
        """Return the sorted neighbor indices of pixel ``i``."""
        if not 0 <= i < self.n_pixels:
            raise IndexError(f"pixel index {i} out of range for {self.width}x{self.height} lattice")
        row = self.neighbor_table[i]
        return sorted(int(j) for j in row if j >= 0)

    def degree(self, i: int) -> int:
        return len(self.neighbors(i))


def edge_count(width: int, height: int) -> int:
    """Number of 4-neighbor edges of a ``width`` x ``height`` free-boundary lattice."""
    if width < 1 or height < 1:
        raise ValueError(f"lattice dimensions must be positive, got {width}x{height}")
    return 2 * width * height - width - height


def state_space_size(image: GrayImage) -> int:
    """Exact number of label configurations, ``q ** n_pixels`` (arbitrary precision)."""
    return image.q ** image.n_pixels
