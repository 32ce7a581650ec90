"""Deterministic generation of piecewise-constant test images.

The generator draws a robot figure — axis-aligned rectangles and bars over
a uniform background — sized relative to the requested dimensions.  Images
of this kind are dominated by large monochrome regions, which is what makes
them restorable: a smoothing prior can tell structure from channel noise.

Geometry notes
--------------
Every part is at least two pixels thick in both directions, junctions
between parts are flush (shared edges rather than overhangs), and the
figure stays clear of the frame.  Thin protrusions and stray concave
nooks are avoided deliberately: single-site optimisation at low
temperature cannot repair noise trapped in such features, so a generator
that produced them would make restoration quality a property of the
drawing rather than of the sampler.  The one exception is the ground
line under the figure — a single-pixel bar on the bottom row.  Bottom-row
pixels have only three neighbours, which leaves the bar stable under
moderate smoothing yet quick to dissolve when the prior dominates; it
acts as a built-in probe for over-smoothing.

The seed perturbs part positions and sizes by a few pixels via the named
generator from :mod:`mrfdenoise.rng`; the jitter draws happen in a fixed
order regardless of ``q`` so that all label counts share layouts for a
given seed.
"""

from __future__ import annotations

import numpy as np

from .image import GrayImage
from .rng import make_rng

__all__ = ["generate_robot"]


def _frac(fraction: float, extent: int) -> int:
    """Round a fractional coordinate to a pixel index."""
    return int(round(fraction * extent))


def _rect(grid: np.ndarray, r0: int, r1: int, c0: int, c1: int, label: int) -> None:
    """Fill a half-open rectangle, clipped to the grid; empty boxes are no-ops."""
    height, width = grid.shape
    r0, r1 = max(r0, 0), min(r1, height)
    c0, c1 = max(c0, 0), min(c1, width)
    if r0 < r1 and c0 < c1:
        grid[r0:r1, c0:c1] = label


def _paint_missing_labels(grid: np.ndarray, q: int) -> None:
    """Ensure every label in [0, q) appears by adding small background chips.

    Scans row-major for 5x5 background patches and paints a 3x3 chip (one
    pixel of clearance on every side) for each missing label.  Deterministic
    and independent of the RNG state.
    """
    height, width = grid.shape
    present = set(np.unique(grid).tolist())
    missing = [label for label in range(q) if label not in present]
    if not missing:
        return
    for r0 in range(0, height - 4, 4):
        if not missing:
            return
        for c0 in range(0, width - 4, 4):
            if not missing:
                return
            patch = grid[r0 : r0 + 5, c0 : c0 + 5]
            if np.all(patch == 0):
                grid[r0 + 1 : r0 + 4, c0 + 1 : c0 + 4] = missing.pop(0)


def generate_robot(width: int, height: int, q: int, seed: int) -> GrayImage:
    """Draw a deterministic robot figure on a ``width`` x ``height`` canvas.

    The figure is a stack of flush rectangles — antenna, head, body, arms,
    legs — plus a single-pixel ground line on the bottom row.  Part labels
    cycle through ``1 .. q-1`` (the background is label 0) so that every
    label appears; at ``q >= 3`` the head gains a pair of eye patches, and
    any labels still unused are added as small chips.  The same seed always
    yields the same image.
    """
    if q < 2:
        raise ValueError(f"need at least two labels, got q={q}")
    grid = np.zeros((height, width), dtype=np.int64)
    rng = make_rng(seed)

    # Fixed draw order keeps layouts identical across label counts.
    shift_x = int(rng.integers(-2, 3))
    shift_y = int(rng.integers(-2, 3))
    head_grow = int(rng.integers(-2, 3))
    arm_reach = int(rng.integers(-1, 2))
    leg_drop = int(rng.integers(-2, 3))
    line_start = int(rng.integers(-2, 3))
    line_grow = int(rng.integers(-2, 3))
    eye_inset = int(rng.integers(0, 2))

    def part_label(index: int) -> int:
        return 1 + index % (q - 1)

    head_lab = part_label(0)
    body_lab = part_label(1)
    arm_lab = part_label(2)
    leg_lab = part_label(3)
    antenna_lab = part_label(4)
    line_lab = part_label(5)
    eye_lab = part_label(6)

    # Body: the anchor every limb is flush against.
    body_r0 = _frac(0.44, height) + shift_y
    body_r1 = _frac(0.61, height) + shift_y
    body_c0 = _frac(0.37, width) + shift_x
    body_c1 = _frac(0.63, width) + shift_x

    # Head: narrower than the body, sitting directly on it (no neck).
    head_c0 = max(_frac(0.41, width) + shift_x - head_grow, body_c0 + 3)
    head_c1 = min(_frac(0.59, width) + shift_x + head_grow, body_c1 - 3)
    head_r0 = _frac(0.33, height) + shift_y
    head_r1 = body_r0

    # Antenna: a squat four-pixel-wide stub centred on the head.  Thinner
    # stubs are fragile under smoothing: two unlucky flips near the tip of
    # a two- or three-pixel column let the tip erode row by row, while a
    # four-wide stub always keeps two mutually supporting interior columns.
    ant_mid = (head_c0 + head_c1) // 2
    ant_r0 = max(head_r0 - 4, 2)
    _rect(grid, ant_r0, head_r0, ant_mid - 2, ant_mid + 2, antenna_lab)

    _rect(grid, head_r0, head_r1, head_c0, head_c1, head_lab)
    _rect(grid, body_r0, body_r1, body_c0, body_c1, body_lab)

    # Arms: tops flush with the body top, inner edges flush with its sides.
    arm_r1 = body_r0 + max(_frac(0.05, height), 4)
    arm_c0 = max(_frac(0.31, width) + shift_x - arm_reach, 2)
    arm_c1 = min(_frac(0.69, width) + shift_x + arm_reach, width - 2)
    _rect(grid, body_r0, arm_r1, arm_c0, body_c0, arm_lab)
    _rect(grid, body_r0, arm_r1, body_c1, arm_c1, arm_lab)

    # Legs: tops flush with the body bottom, outer edges flush with its sides.
    leg_r1 = min(_frac(0.67, height) + shift_y + leg_drop, height - 3)
    leg_r1 = max(leg_r1, body_r1 + 4)
    leg_w = max(_frac(0.055, width), 3)
    _rect(grid, body_r1, leg_r1, body_c0, body_c0 + leg_w, leg_lab)
    _rect(grid, body_r1, leg_r1, body_c1 - leg_w, body_c1, leg_lab)

    # Eyes: only once a third label exists; at q=2 holes in the head would
    # read as structure for the prior to defend rather than decoration.
    if q >= 3:
        eye = max(_frac(0.04, height), 2)
        eye_r0 = head_r0 + max(_frac(0.03, height), 2)
        inset = max(_frac(0.035, width), 2) + eye_inset
        _rect(grid, eye_r0, eye_r0 + eye, head_c0 + inset, head_c0 + inset + eye, eye_lab)
        _rect(grid, eye_r0, eye_r0 + eye, head_c1 - inset - eye, head_c1 - inset, eye_lab)

    # Ground line: single-pixel bar on the bottom row, left of centre.
    # Only drawn once it can carry its own label: as the thinnest feature
    # it is the first casualty of over-smoothing, which makes it a useful
    # probe when comparing temperatures on the multi-level image.
    if q >= 3:
        line_c0 = max(_frac(0.10, width) + line_start, 1)
        line_len = max(_frac(0.12, width) + line_grow, 6)
        _rect(grid, height - 1, height, line_c0, line_c0 + line_len, line_lab)

    _paint_missing_labels(grid, q)
    return GrayImage.from_grid(grid, q)
