"""Grid-sampled signals and fields shared by all solver components.

Three containers cover everything the solvers exchange: a uniformly
sampled function of time (boundary data, traces), a uniformly sampled
function of space (initial data, snapshots), and a space-time array on
the tensor grid.  All are immutable; operations return new instances.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

#: Default absolute tolerance used when checking support/decay invariants.
SUPPORT_TOL = 1e-12


@dataclass(frozen=True)
class TimeSignal:
    """Uniform samples of a function of t, with an optional causality flag.

    ``causal`` asserts the underlying function vanishes for t < 0; samples
    at negative grid times (if the grid has any) must then be zero.
    """

    samples: np.ndarray
    t0: float
    dt: float
    causal: bool = False
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        samples = np.asarray(self.samples)
        object.__setattr__(self, "samples", samples)
        if self.dt <= 0:
            raise ValueError(f"dt must be positive, got {self.dt}")
        if samples.ndim != 1 or samples.size < 2:
            raise ValueError("samples must be a 1-d array with at least 2 entries")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")
        if self.causal:
            neg = self.t < -SUPPORT_TOL
            if np.any(np.abs(samples[neg]) > 1e-9 * (1.0 + np.max(np.abs(samples)))):
                raise ValueError("signal marked causal but has support at t < 0")

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.samples.size)

    @property
    def n(self) -> int:
        return self.samples.size

    def with_samples(self, samples: np.ndarray, causal: bool | None = None,
                     extra_flags: tuple[str, ...] = ()) -> "TimeSignal":
        """Clone onto the same grid with new samples."""
        return replace(self, samples=np.asarray(samples),
                       causal=self.causal if causal is None else causal,
                       flags=self.flags + extra_flags)

    def __add__(self, other: "TimeSignal") -> "TimeSignal":
        self._check_same_grid(other)
        return self.with_samples(self.samples + other.samples,
                                 causal=self.causal and other.causal)

    def __sub__(self, other: "TimeSignal") -> "TimeSignal":
        self._check_same_grid(other)
        return self.with_samples(self.samples - other.samples,
                                 causal=self.causal and other.causal)

    def __mul__(self, c) -> "TimeSignal":
        if isinstance(c, TimeSignal):
            self._check_same_grid(c)
            return self.with_samples(self.samples * c.samples,
                                     causal=self.causal or c.causal)
        return self.with_samples(self.samples * c)

    __rmul__ = __mul__

    def _check_same_grid(self, other: "TimeSignal") -> None:
        if abs(self.t0 - other.t0) > 1e-12 or abs(self.dt - other.dt) > 1e-14 \
                or self.n != other.n:
            raise ValueError("time grids do not match")


@dataclass(frozen=True)
class SpatialProfile:
    """Uniform samples of a function of x on a truncated (padded) box."""

    samples: np.ndarray
    x0: float
    dx: float
    pad: int = 0
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        samples = np.asarray(self.samples)
        object.__setattr__(self, "samples", samples)
        if self.dx <= 0:
            raise ValueError(f"dx must be positive, got {self.dx}")
        if samples.ndim != 1 or samples.size < 4:
            raise ValueError("samples must be a 1-d array with at least 4 entries")
        if not np.all(np.isfinite(samples)):
            raise ValueError("samples must be finite")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.samples.size)

    @property
    def n(self) -> int:
        return self.samples.size

    def with_samples(self, samples: np.ndarray,
                     extra_flags: tuple[str, ...] = ()) -> "SpatialProfile":
        return replace(self, samples=np.asarray(samples),
                       flags=self.flags + extra_flags)

    def edge_decay(self) -> float:
        """Largest magnitude among a few samples at either box end."""
        m = max(4, self.pad)
        s = np.abs(self.samples)
        return float(max(s[:m].max(), s[-m:].max()))


@dataclass(frozen=True)
class SpaceTimeField:
    """2-d array u(x_i, t_n) on the tensor grid, indexed (space, time)."""

    values: np.ndarray
    x0: float
    dx: float
    t0: float
    dt: float
    flags: tuple[str, ...] = ()

    def __post_init__(self):
        values = np.asarray(self.values)
        object.__setattr__(self, "values", values)
        if values.ndim != 2:
            raise ValueError("values must be a 2-d array indexed (space, time)")
        if self.dx <= 0 or self.dt <= 0:
            raise ValueError("grid steps must be positive")
        if not np.all(np.isfinite(values)):
            raise ValueError("field values must be finite")

    @property
    def x(self) -> np.ndarray:
        return self.x0 + self.dx * np.arange(self.values.shape[0])

    @property
    def t(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.values.shape[1])

    @property
    def grid(self) -> tuple[float, float, float, float]:
        return (self.x0, self.dx, self.t0, self.dt)

    @property
    def nx(self) -> int:
        return self.values.shape[0]

    @property
    def nt(self) -> int:
        return self.values.shape[1]

    def with_values(self, values: np.ndarray,
                    extra_flags: tuple[str, ...] = ()) -> "SpaceTimeField":
        return replace(self, values=np.asarray(values),
                       flags=self.flags + extra_flags)

    def time_slice(self, n: int) -> SpatialProfile:
        return SpatialProfile(self.values[:, n], self.x0, self.dx)

    def space_index(self, x: float) -> int:
        j = int(round((x - self.x0) / self.dx))
        if not (0 <= j < self.nx) or abs(self.x0 + j * self.dx - x) > 1e-9 * self.dx + 1e-12:
            raise ValueError(f"x = {x} is not a grid node")
        return j

    def time_signal_at(self, x: float, causal: bool = False) -> TimeSignal:
        """Extract the time trace along a grid node x."""
        return TimeSignal(self.values[self.space_index(x), :], self.t0, self.dt,
                          causal=causal)


def time_grid(T: float, m: int) -> tuple[np.ndarray, float]:
    """m uniformly spaced samples on [0, T], inclusive of both ends."""
    if m < 2 or T <= 0:
        raise ValueError("need m >= 2 samples and T > 0")
    t = np.linspace(0.0, T, m)
    return t, float(t[1] - t[0])


def space_grid(L: float, n: int) -> tuple[np.ndarray, float]:
    """n periodic samples on [-L, L), with x = 0 on a node (n even)."""
    if n % 2 or n < 8:
        raise ValueError("need an even n >= 8")
    dx = 2.0 * L / n
    x = -L + dx * np.arange(n)
    return x, dx


def smooth_bump(t: np.ndarray, T: float = 1.0, amplitude: float = 1.0,
                t_start: float = 0.0) -> np.ndarray:
    """Compactly supported C^inf bump on (t_start, t_start + T).

    exp(-1/(s(T-s))) with s = t - t_start, scaled so the peak equals
    ``amplitude``; vanishes with all derivatives at both endpoints, which
    is the smoothness class the boundary forcing operators require.
    """
    s = np.asarray(t, dtype=float) - t_start
    out = np.zeros_like(s)
    inside = (s > 0) & (s < T)
    si = s[inside]
    out[inside] = np.exp(-1.0 / (si * (T - si)))
    return amplitude * out / np.exp(-4.0 / T**2)


def gaussian_profile(x: np.ndarray, amplitude: float = 1.0, center: float = 0.0,
                     width: float = 1.0) -> np.ndarray:
    return amplitude * np.exp(-((np.asarray(x) - center) / width) ** 2 / 2.0)


def causal_signal(samples: np.ndarray, dt: float) -> TimeSignal:
    """Convenience constructor for signals on [0, T] known to vanish at t<0."""
    return TimeSignal(np.asarray(samples), 0.0, dt, causal=True)
