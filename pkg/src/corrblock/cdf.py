"""Right-continuous piecewise-constant CDFs and distances between them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class StepCdf:
    """CDF that jumps to ``values[k]`` at ``breakpoints[k]``.

    The CDF is 0 below ``breakpoints[0]`` and ``values[-1]`` (normally 1)
    from the last breakpoint on.
    """

    breakpoints: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        x = np.asarray(self.breakpoints, dtype=float)
        f = np.asarray(self.values, dtype=float)
        if x.shape != f.shape or x.ndim != 1:
            raise ValueError("breakpoints and values must be 1-D arrays of equal length")
        if np.any(np.diff(x) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if np.any(np.diff(f) < -1e-12) or (f.size and (f[0] < 0 or f[-1] > 1 + 1e-9)):
            raise ValueError("CDF values must be nondecreasing within [0, 1]")
        object.__setattr__(self, "breakpoints", x)
        object.__setattr__(self, "values", f)

    @classmethod
    def from_atoms(cls, points, weights, normalize: bool = False):
        """CDF of a discrete distribution; zero-weight atoms are dropped."""
        pts = np.asarray(points, dtype=float).ravel()
        w = np.asarray(weights, dtype=float).ravel()
        keep = w > 0
        pts, w = pts[keep], w[keep]
        uniq, inv = np.unique(pts, return_inverse=True)
        mass = np.zeros(uniq.size)
        np.add.at(mass, inv, w)
        cum = np.cumsum(mass)
        if normalize:
            cum /= cum[-1]
        elif cum.size and abs(cum[-1] - 1.0) < 1e-9:
            cum[-1] = 1.0
        return cls(uniq, np.minimum(cum, 1.0))

    def __call__(self, x):
        idx = np.searchsorted(self.breakpoints, x, side="right") - 1
        out = np.where(idx >= 0, self.values[np.maximum(idx, 0)], 0.0)
        return float(out) if np.ndim(out) == 0 else out

    @property
    def masses(self) -> np.ndarray:
        return np.diff(self.values, prepend=0.0)

    def __len__(self) -> int:
        return self.breakpoints.size


def ks_distance(a: StepCdf, b: StepCdf) -> float:
    """Supremum of ``|a(x) - b(x)|`` over the real line.

    Both functions are constant between the union of their breakpoints, so
    evaluating at the breakpoints covers every plateau.
    """
    pts = np.union1d(a.breakpoints, b.breakpoints)
    if pts.size == 0:
        return 0.0
    return float(np.max(np.abs(a(pts) - b(pts))))
