"""Rasterized planar domains and grid functions vanishing off the domain.

A :class:`DomainMask` is a boolean occupancy grid with spacing ``h``. Each
cell is identified with its center node; cells outside the grid (and inactive
cells) carry the homogeneous Dirichlet condition. All functionals share the
five-point stencil, so that ``dirichlet_energy(u) == h**2 * u @ K @ u`` with
``K = mask.stiffness``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
import scipy.sparse as sp
from scipy import ndimage

__all__ = [
    "DomainMask",
    "GridFunction",
    "ResolutionError",
    "make_disk",
    "make_two_disks",
    "make_rectangle",
    "make_annulus",
    "make_L_shape",
    "make_discrete_ball",
    "place_side_by_side",
    "shape_with_measure",
    "SHAPE_KINDS",
    "sign_split",
    "measure",
    "signed_square_integral",
    "l2_norm_sq",
    "dirichlet_energy",
    "quotient_Q",
    "read_mask",
    "write_mask",
    "format_mask",
    "parse_mask",
]

# Nodes on the boundary of the ideal shape are excluded (the domain is open).
_EPS = 1e-9
# Inactive columns between the two disks of make_two_disks.
TWO_DISK_GAP = 4


class ResolutionError(ValueError):
    """A shape feature is thinner than three cells."""


@dataclass(frozen=True, eq=False)
class DomainMask:
    active: np.ndarray
    h: float
    id: str = ""
    ideal_measure: float | None = None

    def __post_init__(self):
        a = np.array(self.active, dtype=bool, copy=True)
        if a.ndim != 2:
            raise ValueError("mask occupancy must be a 2-D array")
        if not self.h > 0:
            raise ValueError(f"cell width must be positive, got {self.h!r}")
        a.setflags(write=False)
        object.__setattr__(self, "active", a)
        object.__setattr__(self, "h", float(self.h))

    def __eq__(self, other):
        if not isinstance(other, DomainMask):
            return NotImplemented
        return self.h == other.h and np.array_equal(self.active, other.active)

    __hash__ = None

    def __repr__(self):
        return (f"DomainMask(id={self.id!r}, {self.width}x{self.height}, h={self.h!r}, "
                f"cells={self.n_active})")

    @property
    def width(self) -> int:
        return self.active.shape[1]

    @property
    def height(self) -> int:
        return self.active.shape[0]

    @cached_property
    def n_active(self) -> int:
        return int(self.active.sum())

    @property
    def measure(self) -> float:
        return self.h ** 2 * self.n_active

    @cached_property
    def flat_index(self) -> np.ndarray:
        """Row-major positions of the active cells; fixes the vector ordering."""
        return np.flatnonzero(self.active)

    @cached_property
    def rows_cols(self) -> tuple[np.ndarray, np.ndarray]:
        return np.unravel_index(self.flat_index, self.active.shape)

    @cached_property
    def cell_index(self) -> np.ndarray:
        idx = np.full(self.active.shape, -1, dtype=np.int64)
        idx.flat[self.flat_index] = np.arange(self.n_active)
        return idx

    @cached_property
    def edges(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Interior edges (i, j) between active neighbours, and per-cell
        counts of edges leading to inactive/outside cells."""
        a = np.pad(self.active, 1)
        idx = np.pad(self.cell_index, 1, constant_values=-1)
        right = a[:, :-1] & a[:, 1:]
        down = a[:-1, :] & a[1:, :]
        i = np.concatenate([idx[:, :-1][right], idx[:-1, :][down]])
        j = np.concatenate([idx[:, 1:][right], idx[1:, :][down]])
        degree = np.bincount(np.concatenate([i, j]), minlength=self.n_active)
        return i, j, 4 - degree

    @cached_property
    def stiffness(self) -> sp.csr_matrix:
        """Five-point Dirichlet Laplacian on the active cells, scaled by 1/h^2."""
        n = self.n_active
        i, j, _ = self.edges
        off = sp.coo_matrix((-np.ones(2 * len(i)), (np.concatenate([i, j]), np.concatenate([j, i]))),
                            shape=(n, n))
        K = (off + 4.0 * sp.identity(n)).tocsr() / self.h ** 2
        K.sort_indices()
        return K

    @cached_property
    def solve(self):
        """Factorized K^{-1} (sparse LU), for preconditioned descent."""
        from scipy.sparse.linalg import splu

        lu = splu(self.stiffness.tocsc())
        return lu.solve

    @cached_property
    def components(self) -> tuple[np.ndarray, int]:
        """Connected components (4-neighbour) as per-cell labels 0..k-1."""
        labels, k = ndimage.label(self.active)
        return labels.flat[self.flat_index] - 1, int(k)

    @property
    def n_components(self) -> int:
        return self.components[1]

    def submask(self, keep: np.ndarray, id: str | None = None) -> "DomainMask":
        """Mask of the active cells where the per-cell boolean ``keep`` holds."""
        grid = np.zeros(self.active.shape, dtype=bool)
        grid.flat[self.flat_index[np.asarray(keep, dtype=bool)]] = True
        return DomainMask(grid, self.h, self.id if id is None else id)

    def contains(self, other: "DomainMask") -> bool:
        return (self.h == other.h and self.active.shape == other.active.shape
                and bool(np.all(self.active[other.active])))

    def ones(self) -> "GridFunction":
        return GridFunction(self, np.ones(self.n_active))

    def center(self) -> tuple[float, float]:
        r, c = self.rows_cols
        return float(r.mean()), float(c.mean())


@dataclass(frozen=True, eq=False)
class GridFunction:
    """Values on the active cells of ``mask``; zero everywhere else."""

    mask: DomainMask
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.shape != (self.mask.n_active,):
            raise ValueError(f"expected {self.mask.n_active} values, got shape {v.shape}")
        object.__setattr__(self, "values", v)

    @classmethod
    def from_array(cls, mask: DomainMask, grid: np.ndarray) -> "GridFunction":
        return cls(mask, np.asarray(grid, dtype=float).flat[mask.flat_index])

    def to_array(self) -> np.ndarray:
        out = np.zeros(self.mask.active.shape)
        out.flat[self.mask.flat_index] = self.values
        return out

    def __neg__(self):
        return GridFunction(self.mask, -self.values)

    def __mul__(self, c):
        return GridFunction(self.mask, c * self.values)

    __rmul__ = __mul__

    def abs(self) -> "GridFunction":
        return GridFunction(self.mask, np.abs(self.values))

    def restrict(self, sub: DomainMask) -> "GridFunction":
        """Values on a submask with the same grid."""
        return GridFunction(sub, self.to_array().flat[sub.flat_index])

    def extend(self, sup: DomainMask) -> "GridFunction":
        """Zero extension to a mask containing this one."""
        return GridFunction.from_array(sup, self.to_array())


def sign_split(u: GridFunction):
    """Positive/negative parts and their strict positivity sets.

    Returns ``(u_plus, u_minus, omega_plus, omega_minus)`` with
    ``u = u_plus - u_minus``; the parts live on ``u.mask``.
    """
    v = u.values
    plus = GridFunction(u.mask, np.maximum(v, 0.0))
    minus = GridFunction(u.mask, np.maximum(-v, 0.0))
    return plus, minus, u.mask.submask(v > 0), u.mask.submask(v < 0)


def measure(mask: DomainMask) -> float:
    return mask.measure


def signed_square_integral(u: GridFunction) -> float:
    """Midpoint rule for the integral of |u| u."""
    v = u.values
    return u.mask.h ** 2 * float(np.dot(np.abs(v), v))


def l2_norm_sq(u: GridFunction) -> float:
    return u.mask.h ** 2 * float(np.dot(u.values, u.values))


def dirichlet_energy(u: GridFunction) -> float:
    """Five-point energy: squared differences over every edge of an active
    cell, with zero taken on the far side of boundary edges."""
    i, j, boundary = u.mask.edges
    v = u.values
    d = v[i] - v[j]
    return float(np.dot(d, d) + np.dot(boundary, v * v))


def quotient_Q(u: GridFunction, alpha: float) -> float:
    """(energy + alpha |int |u|u|) / ||u||^2."""
    n2 = l2_norm_sq(u)
    if n2 == 0.0:
        raise ZeroDivisionError("quotient of the zero function")
    return (dirichlet_energy(u) + alpha * abs(signed_square_integral(u))) / n2


# --- constructors ---------------------------------------------------------

def _check_resolution(h, **dims):
    if not h > 0:
        raise ValueError(f"cell width must be positive, got {h!r}")
    for name, v in dims.items():
        if not v >= 3 * h:
            raise ResolutionError(f"{name}={v!r} is below three cells (h={h!r})")


def _disk_block(radius: float, h: float) -> np.ndarray:
    N = int(math.ceil(radius / h)) + 1
    k = np.arange(-N, N + 1)
    r2 = k[:, None] ** 2 + k[None, :] ** 2
    return r2 < (radius / h) ** 2 - _EPS


def make_disk(radius: float, h: float, id: str = "disk") -> DomainMask:
    """Disk of the given radius, centered on a node."""
    _check_resolution(h, radius=radius)
    return DomainMask(_disk_block(radius, h), h, id, math.pi * radius ** 2)


def place_side_by_side(blocks, gap: int = TWO_DISK_GAP, values=None):
    """Concatenate occupancy blocks horizontally, vertically centred, with
    ``gap`` inactive columns between the active parts of neighbours.

    If ``values`` (arrays shaped like the blocks) is given, they are moved
    the same way and ``(occupancy, values)`` is returned.
    """
    layers = [blocks] if values is None else [blocks, values]
    out = []
    boxes = []
    for b in blocks:
        cols = np.flatnonzero(b.any(axis=0))
        rows = np.flatnonzero(b.any(axis=1))
        boxes.append((slice(rows[0], rows[-1] + 1), slice(cols[0], cols[-1] + 1)))
    height = max(bx[0].stop - bx[0].start for bx in boxes) + 2
    for layer in layers:
        dtype = np.asarray(layer[0]).dtype
        parts = [np.zeros((height, 1), dtype=dtype)]
        for k, (arr, bx) in enumerate(zip(layer, boxes)):
            t = np.asarray(arr)[bx]
            if k:
                parts.append(np.zeros((height, gap), dtype=dtype))
            top = (height - t.shape[0]) // 2
            col = np.zeros((height, t.shape[1]), dtype=dtype)
            col[top:top + t.shape[0]] = t
            parts.append(col)
        parts.append(np.zeros((height, 1), dtype=dtype))
        out.append(np.hstack(parts))
    return out[0] if values is None else (out[0], out[1])


def make_two_disks(r1: float, r2: float, h: float, id: str = "two_disks") -> DomainMask:
    """Two disjoint disks on a horizontal axis with a fixed inactive gap."""
    _check_resolution(h, r1=r1, r2=r2)
    grid = place_side_by_side([_disk_block(r1, h), _disk_block(r2, h)])
    return DomainMask(grid, h, id, math.pi * (r1 ** 2 + r2 ** 2))


def make_rectangle(a: float, b: float, h: float, id: str = "rectangle") -> DomainMask:
    """Open rectangle (0, a) x (0, b); nodes sit at integer multiples of h."""
    _check_resolution(h, a=a, b=b)
    nx = int(math.ceil(a / h - _EPS))
    ny = int(math.ceil(b / h - _EPS))
    x = np.arange(nx + 1)
    y = np.arange(ny + 1)
    inside_x = (x > _EPS) & (x < a / h - _EPS)
    inside_y = (y > _EPS) & (y < b / h - _EPS)
    return DomainMask(np.outer(inside_y, inside_x), h, id, a * b)


def make_annulus(r_out: float, r_in: float, h: float, id: str = "annulus") -> DomainMask:
    _check_resolution(h, r_out=r_out, thickness=r_out - r_in)
    if not r_in > 0:
        raise ValueError(f"inner radius must be positive, got {r_in!r}")
    N = int(math.ceil(r_out / h)) + 1
    k = np.arange(-N, N + 1)
    r2 = k[:, None] ** 2 + k[None, :] ** 2
    grid = (r2 < (r_out / h) ** 2 - _EPS) & (r2 > (r_in / h) ** 2 + _EPS)
    return DomainMask(grid, h, id, math.pi * (r_out ** 2 - r_in ** 2))


def make_L_shape(size: float, h: float, id: str = "L_shape") -> DomainMask:
    """The square (0, size)^2 with the closed upper-right quarter removed."""
    _check_resolution(h, arm=size / 2)
    sq = make_rectangle(size, size, h)
    n = sq.height
    k = np.arange(n)
    # row index = y/h; remove nodes with x >= size/2 and y >= size/2
    cut = k >= size / (2 * h) - _EPS
    grid = np.array(sq.active)
    grid[np.ix_(cut, cut[: sq.width])] = False
    return DomainMask(grid, h, id, 0.75 * size ** 2)


def make_discrete_ball(count: int, h: float, id: str = "ball") -> DomainMask:
    """The ``count`` cells closest to the grid center.

    Cells are ordered by squared distance to the center node, ties broken
    lexicographically by (row, col); the first ``count`` are active.
    """
    if count < 1:
        raise ValueError(f"need at least one cell, got {count}")
    N = int(math.ceil(math.sqrt(count / math.pi))) + 2
    grid = np.zeros((2 * N + 1, 2 * N + 1), dtype=bool)
    grid.flat[ball_order(N)[:count]] = True
    return DomainMask(grid, h, id)


def ball_order(N: int) -> np.ndarray:
    """Flat indices of a (2N+1)^2 grid by distance from the center, then (row, col)."""
    k = np.arange(-N, N + 1)
    r2 = (k[:, None] ** 2 + k[None, :] ** 2).ravel()
    # lexsort: last key is primary; flat index order equals (row, col) order
    return np.lexsort((np.arange(r2.size), r2))


SHAPE_KINDS = ("disk", "square", "rectangle", "annulus", "L_shape", "two_disks")


def shape_with_measure(kind: str, measure: float, h: float, id: str | None = None,
                       aspect: float = 2.0, inner_ratio: float = 0.5,
                       fraction: float = 0.5) -> DomainMask:
    """Build a named test shape whose ideal measure is ``measure``.

    ``aspect`` is the side ratio of ``rectangle``, ``inner_ratio`` the radius
    ratio of ``annulus`` and ``fraction`` the share of the larger disk in
    ``two_disks`` (1/2 gives two equal disks).
    """
    if not measure > 0:
        raise ValueError(f"measure must be positive, got {measure!r}")
    id = id or kind
    if kind == "disk":
        return make_disk(math.sqrt(measure / math.pi), h, id)
    if kind == "square":
        s = math.sqrt(measure)
        return make_rectangle(s, s, h, id)
    if kind == "rectangle":
        return make_rectangle(math.sqrt(aspect * measure), math.sqrt(measure / aspect), h, id)
    if kind == "annulus":
        r_out = math.sqrt(measure / (math.pi * (1 - inner_ratio ** 2)))
        return make_annulus(r_out, inner_ratio * r_out, h, id)
    if kind == "L_shape":
        return make_L_shape(math.sqrt(4 * measure / 3), h, id)
    if kind == "two_disks":
        if not 0.5 <= fraction < 1:
            raise ValueError(f"fraction must lie in [1/2, 1), got {fraction!r}")
        r1 = math.sqrt(fraction * measure / math.pi)
        r2 = math.sqrt((1 - fraction) * measure / math.pi)
        return make_two_disks(r1, r2, h, id)
    raise ValueError(f"unknown shape kind {kind!r}; expected one of {SHAPE_KINDS}")


# --- text format ----------------------------------------------------------

def format_mask(mask: DomainMask) -> str:
    lines = [f"mask {mask.width} {mask.height} {mask.h!r}"]
    for row in mask.active:
        lines.append("".join("1" if c else "0" for c in row))
    return "\n".join(lines) + "\n"


def parse_mask(text: str, id: str = "") -> DomainMask:
    lines = [ln.strip() for ln in text.strip().splitlines()]
    head = lines[0].split()
    if len(head) != 4 or head[0] != "mask":
        raise ValueError(f"bad mask header: {lines[0]!r}")
    width, height, h = int(head[1]), int(head[2]), float(head[3])
    rows = lines[1:]
    if len(rows) != height or any(len(r) != width or set(r) - {"0", "1"} for r in rows):
        raise ValueError(f"mask body does not match header {width}x{height}")
    grid = np.array([[c == "1" for c in r] for r in rows], dtype=bool).reshape(height, width)
    return DomainMask(grid, h, id)


def write_mask(mask: DomainMask, path) -> None:
    Path(path).write_text(format_mask(mask))


def read_mask(path) -> DomainMask:
    p = Path(path)
    return parse_mask(p.read_text(), id=p.stem)
