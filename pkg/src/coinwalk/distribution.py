"""Position distributions and initial amplitude lists."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping

import numpy as np
from numpy.typing import NDArray

from .errors import NormalizationError

__all__ = ["Distribution", "AmplitudeList"]

DIST_TOL = 1e-10
AMP_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class Distribution:
    """Probabilities on the contiguous window x_min .. x_min + len(probs) - 1.

    Positions outside the window have probability zero.
    """

    x_min: int
    probs: NDArray[np.float64]
    t: int | None = None

    def __post_init__(self) -> None:
        probs = np.asarray(self.probs, dtype=np.float64)
        if probs.ndim != 1 or probs.size == 0:
            raise ValueError("distribution needs a non-empty 1-d probability array")
        probs.setflags(write=False)
        object.__setattr__(self, "probs", probs)
        object.__setattr__(self, "x_min", int(self.x_min))

    @classmethod
    def from_mapping(cls, m: Mapping[int, float], t: int | None = None) -> "Distribution":
        lo, hi = min(m), max(m)
        probs = np.zeros(hi - lo + 1)
        for x, v in m.items():
            probs[x - lo] = v
        return cls(lo, probs, t)

    @property
    def x_max(self) -> int:
        return self.x_min + self.probs.size - 1

    @property
    def positions(self) -> NDArray[np.int64]:
        return np.arange(self.x_min, self.x_max + 1)

    def __getitem__(self, x: int) -> float:
        i = int(x) - self.x_min
        if 0 <= i < self.probs.size:
            return float(self.probs[i])
        return 0.0

    def __len__(self) -> int:
        return self.probs.size

    def items(self) -> Iterator[tuple[int, float]]:
        for x, p in zip(range(self.x_min, self.x_max + 1), self.probs):
            yield x, float(p)

    def as_dict(self, drop_zeros: bool = True) -> dict[int, float]:
        return {x: p for x, p in self.items() if p != 0.0 or not drop_zeros}

    def total(self) -> float:
        return math.fsum(self.probs)

    def on_window(self, lo: int, hi: int) -> NDArray[np.float64]:
        """Probabilities on [lo, hi], zero-padded where the window does not reach."""
        out = np.zeros(hi - lo + 1)
        a, b = max(lo, self.x_min), min(hi, self.x_max)
        if a <= b:
            out[a - lo : b - lo + 1] = self.probs[a - self.x_min : b - self.x_min + 1]
        return out

    def validate(self, tol: float = DIST_TOL) -> "Distribution":
        if np.any(self.probs < -tol) or np.any(self.probs > 1.0 + tol):
            raise NormalizationError("probabilities outside [0, 1]")
        s = self.total()
        if abs(s - 1.0) > tol:
            raise NormalizationError(f"probabilities sum to {s!r}")
        return self


@dataclass(frozen=True)
class AmplitudeList:
    """Pure coin-walker state sum_x |x> (a_x |R> + b_x |L>).

    ``entries`` holds (x, a_x, b_x) triples with distinct positions.
    """

    entries: tuple[tuple[int, complex, complex], ...]
    tol: float = field(default=AMP_TOL, repr=False, compare=False)

    def __post_init__(self) -> None:
        entries = tuple((int(x), complex(a), complex(b)) for x, a, b in self.entries)
        if not entries:
            raise NormalizationError("empty amplitude list")
        xs = [x for x, _, _ in entries]
        if len(set(xs)) != len(xs):
            raise ValueError("amplitude list repeats a position")
        object.__setattr__(self, "entries", tuple(sorted(entries)))
        n = self.norm()
        if abs(n - 1.0) > self.tol:
            raise NormalizationError(f"amplitudes have total weight {n!r}, expected 1")

    @classmethod
    def local(cls, x0: int = 0, a: complex = 1.0, b: complex = 0.0) -> "AmplitudeList":
        return cls(((x0, a, b),))

    @classmethod
    def from_json(cls, items: Iterable[Mapping]) -> "AmplitudeList":
        """Parse ``[{"x": int, "a": [re, im], "b": [re, im]}, ...]``."""
        entries = []
        for item in items:
            try:
                x = item["x"]
                a = complex(*item["a"])
                b = complex(*item["b"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ValueError(f"malformed amplitude entry {item!r}") from exc
            if int(x) != x:
                raise ValueError(f"position must be an integer, got {x!r}")
            entries.append((int(x), a, b))
        return cls(tuple(entries))

    def to_json(self) -> list[dict]:
        return [
            {"x": x, "a": [a.real, a.imag], "b": [b.real, b.imag]} for x, a, b in self.entries
        ]

    def norm(self) -> float:
        return math.fsum(abs(a) ** 2 + abs(b) ** 2 for _, a, b in self.entries)

    def weights(self) -> dict[int, float]:
        """Site weights p_x = |a_x|^2 + |b_x|^2."""
        return {x: abs(a) ** 2 + abs(b) ** 2 for x, a, b in self.entries}

    @property
    def x_min(self) -> int:
        return self.entries[0][0]

    @property
    def x_max(self) -> int:
        return self.entries[-1][0]

    def vector(self) -> NDArray[np.complex128]:
        """Amplitudes on the window [x_min, x_max] as an array of shape (n, 2)."""
        psi = np.zeros((self.x_max - self.x_min + 1, 2), dtype=np.complex128)
        for x, a, b in self.entries:
            psi[x - self.x_min] = (a, b)
        return psi
