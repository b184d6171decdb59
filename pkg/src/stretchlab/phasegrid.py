"""Uniform rectangular phase-space grids and their on-disk format.

Nodes sit at ``x_min + i*dx`` for ``i = 0..nx-1`` with ``dx = (x_max - x_min)/nx``
(the periodic/FFT convention), so a symmetric grid with an even number of
points samples the origin and a grid scaled by ``s`` samples exactly the
scaled nodes.  Integrals use the plain rectangle sum, which is the midpoint
rule on the cells centred at the nodes.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from .errors import GridError

MIN_POINTS = 16


@dataclass(frozen=True)
class PhaseGrid:
    x_min: float
    x_max: float
    p_min: float
    p_max: float
    nx: int = 128
    np: int = 128

    def __post_init__(self):
        if not (self.x_max > self.x_min and self.p_max > self.p_min):
            raise GridError(f"empty grid: x [{self.x_min}, {self.x_max}], p [{self.p_min}, {self.p_max}]")
        if self.nx < MIN_POINTS or self.np < MIN_POINTS:
            raise GridError(f"grid needs at least {MIN_POINTS} points per axis, got {self.nx}x{self.np}")

    @classmethod
    def symmetric(cls, x_half: float, p_half: float | None = None, n: int = 128) -> "PhaseGrid":
        p_half = x_half if p_half is None else p_half
        return cls(-x_half, x_half, -p_half, p_half, n, n)

    @property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.nx

    @property
    def dp(self) -> float:
        return (self.p_max - self.p_min) / self.np

    @property
    def cell(self) -> float:
        return self.dx * self.dp

    @property
    def shape(self) -> tuple[int, int]:
        return (self.nx, self.np)

    @property
    def x(self) -> np.ndarray:
        return self.x_min + self.dx * np.arange(self.nx)

    @property
    def p(self) -> np.ndarray:
        return self.p_min + self.dp * np.arange(self.np)

    def mesh(self) -> tuple[np.ndarray, np.ndarray]:
        """``(X, P)`` arrays of shape ``(nx, np)``; axis 0 is position."""
        return np.meshgrid(self.x, self.p, indexing="ij")

    def scaled(self, factor: float) -> "PhaseGrid":
        """Grid whose nodes are this grid's nodes multiplied by ``factor``."""
        return PhaseGrid(
            self.x_min * factor, self.x_max * factor, self.p_min * factor, self.p_max * factor, self.nx, self.np
        )

    def integrate(self, values: np.ndarray) -> float:
        return float(np.sum(values) * self.cell)

    def edge_mass(self, values: np.ndarray, width: int = 1) -> float:
        """Largest absolute value within ``width`` nodes of the boundary."""
        v = np.abs(values)
        return float(max(v[:width].max(), v[-width:].max(), v[:, :width].max(), v[:, -width:].max()))

    def as_dict(self) -> dict:
        return asdict(self)


def write_grid_csv(path, grid: PhaseGrid, values: np.ndarray, header: dict) -> tuple[Path, Path]:
    """Write ``x,p,value`` triplets plus a JSON header next to it.

    Returns the CSV and JSON paths.  Formatting is locale-independent and
    uses ``repr``-exact floats so repeated runs are byte-identical.
    """
    path = Path(path)
    values = np.asarray(values, dtype=float)
    if values.shape != grid.shape:
        raise GridError(f"values shape {values.shape} does not match grid {grid.shape}")
    X, P = grid.mesh()
    rows = np.column_stack([X.ravel(), P.ravel(), values.ravel()])
    with open(path, "w", newline="\n") as fh:
        fh.write("x,p,value\n")
        for x, p, v in rows:
            fh.write(f"{float(x)!r},{float(p)!r},{float(v)!r}\n")
    meta = dict(header)
    meta["grid"] = grid.as_dict()
    json_path = path.with_suffix(".json")
    json_path.write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return path, json_path


def read_grid_csv(path) -> tuple[PhaseGrid, np.ndarray, dict]:
    path = Path(path)
    meta = json.loads(path.with_suffix(".json").read_text())
    grid = PhaseGrid(**meta["grid"])
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    values = data[:, 2].reshape(grid.shape)
    return grid, values, meta
