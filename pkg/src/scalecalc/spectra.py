"""Exact Laplace-type spectra on model manifolds and Weyl exponent fitting.

Every model uses a fixed geometry (circle of length 2*pi, unit torus factors,
unit round sphere, unit interval) so that eigenvalues are known in closed form.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from .errors import DomainError, FitError

BOUNDARY_CONDITIONS = ("dirichlet", "neumann", "mixed")


@dataclass(frozen=True)
class ManifoldModel:
    """One of the model manifolds.

    ``kind`` is one of ``circle``, ``torus``, ``sphere``, ``interval`` or
    ``orderd``. ``dim`` is the manifold dimension, ``order`` the operator
    order (2 for every Laplacian), ``bc`` the interval boundary condition.
    """

    kind: str
    dim: int = 1
    order: int = 2
    bc: str | None = None

    def __post_init__(self):
        if self.kind not in ("circle", "torus", "sphere", "interval", "orderd"):
            raise DomainError(f"unknown model kind {self.kind!r}")
        if self.dim < 1:
            raise DomainError(f"dimension must be >= 1, got {self.dim}")
        if self.order < 1:
            raise DomainError(f"operator order must be >= 1, got {self.order}")
        if self.kind == "interval" and self.bc not in BOUNDARY_CONDITIONS:
            raise DomainError(f"interval needs bc in {BOUNDARY_CONDITIONS}, got {self.bc!r}")
        if self.kind in ("circle", "interval") and self.dim != 1:
            raise DomainError(f"{self.kind} is one-dimensional")

    @property
    def weyl_exponent(self) -> float:
        return self.order / self.dim

    @property
    def label(self) -> str:
        if self.kind == "circle":
            return "circle"
        if self.kind == "interval":
            return f"interval:{self.bc}"
        if self.kind == "orderd":
            return f"orderd:n={self.dim},d={self.order}"
        return f"{self.kind}:{self.dim}"


def circle() -> ManifoldModel:
    return ManifoldModel("circle")


def flat_torus(n: int) -> ManifoldModel:
    return ManifoldModel("torus", dim=n)


def round_sphere(n: int) -> ManifoldModel:
    return ManifoldModel("sphere", dim=n)


def interval(bc: str = "dirichlet") -> ManifoldModel:
    return ManifoldModel("interval", bc=bc)


def synthetic_order_d(n: int, d: int) -> ManifoldModel:
    return ManifoldModel("orderd", dim=n, order=d)


@dataclass(frozen=True, eq=False)
class Spectrum:
    """Eigenvalue levels with multiplicities, materialized to ``count`` entries.

    ``multiplicities`` holds the full multiplicity of each level even when
    ``count`` cuts through the last level.
    """

    eigenvalues: np.ndarray
    multiplicities: np.ndarray
    count: int
    source: str = ""
    model: ManifoldModel | None = field(default=None, compare=False)

    def __post_init__(self):
        ev = np.asarray(self.eigenvalues, dtype=float)
        mult = np.asarray(self.multiplicities, dtype=np.int64)
        if ev.shape != mult.shape or ev.ndim != 1:
            raise ValueError("eigenvalues and multiplicities must be 1-d of equal length")
        if ev.size > 1 and not np.all(np.diff(ev) > 0):
            raise ValueError("eigenvalue levels must be strictly increasing")
        if np.any(mult < 1):
            raise ValueError("multiplicities must be positive")
        if self.count > int(mult.sum()):
            raise ValueError("count exceeds the total multiplicity of the stored levels")
        ev.setflags(write=False)
        mult.setflags(write=False)
        object.__setattr__(self, "eigenvalues", ev)
        object.__setattr__(self, "multiplicities", mult)

    def __len__(self):
        return self.count

    def expanded(self) -> np.ndarray:
        """Nondecreasing eigenvalue sequence lambda_1, ..., lambda_count."""
        return np.repeat(self.eigenvalues, self.multiplicities)[: self.count]

    def level_multiplicity_per_rank(self) -> np.ndarray:
        return np.repeat(self.multiplicities, self.multiplicities)[: self.count]

    @property
    def last(self) -> float:
        return float(self.expanded()[-1]) if self.count else math.inf

    def nonpositive_count(self) -> int:
        return int(np.count_nonzero(self.expanded() <= 0))

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["rank", "eigenvalue", "multiplicity"])
        for mu, (lam, m) in enumerate(zip(self.expanded(), self.level_multiplicity_per_rank()), 1):
            writer.writerow([mu, f"{lam:.12g}", int(m)])
        return buf.getvalue()

    @classmethod
    def empty(cls) -> Spectrum:
        return cls(np.empty(0), np.empty(0, dtype=np.int64), 0, source="empty")


def _levels_until(count, level_fn):
    """Collect (value, multiplicity) levels until their total reaches count."""
    values, mults, total, ell = [], [], 0, 0
    while total < count:
        lam, m = level_fn(ell)
        values.append(lam)
        mults.append(m)
        total += m
        ell += 1
    return np.array(values, dtype=float), np.array(mults, dtype=np.int64)


def sum_of_squares_counts(n: int, bound: int) -> np.ndarray:
    """r_n(m) = #{k in Z^n : |k|^2 = m} for m = 0..bound."""
    roots = np.arange(0, math.isqrt(bound) + 1)
    r1 = np.zeros(bound + 1, dtype=np.int64)
    r1[roots**2] = 2
    r1[0] = 1
    r = r1.copy()
    for _ in range(n - 1):
        nxt = np.zeros_like(r)
        for k in roots:
            s = k * k
            w = 1 if k == 0 else 2
            nxt[s:] += w * r[: bound + 1 - s]
        r = nxt
    return r


def _torus_levels(n, count):
    if n == 1:
        return _levels_until(count, lambda k: (k * k, 1 if k == 0 else 2))
    ball = math.pi ** (n / 2) / math.gamma(n / 2 + 1)
    bound = int((count / ball) ** (2 / n) * 1.25) + 8
    while True:
        r = sum_of_squares_counts(n, bound)
        if r.sum() >= count:
            break
        bound *= 2
    occupied = np.nonzero(r)[0]
    cum = np.cumsum(r[occupied])
    stop = int(np.searchsorted(cum, count)) + 1
    occupied = occupied[:stop]
    return occupied.astype(float), r[occupied]


def sphere_multiplicity(n: int, ell: int) -> int:
    """Dimension of degree-ell spherical harmonics on S^n."""
    lower = math.comb(n + ell - 2, ell - 2) if ell >= 2 else 0
    return math.comb(n + ell, ell) - lower


def _interval_level(bc):
    offset = {"dirichlet": 1.0, "neumann": 0.0, "mixed": 0.5}[bc]
    return lambda ell: ((math.pi * (ell + offset)) ** 2, 1)


@lru_cache(maxsize=64)
def enumerate_spectrum(model: ManifoldModel, count: int) -> Spectrum:
    """First ``count`` eigenvalues of the model operator, with multiplicity."""
    if count < 1:
        raise DomainError("count must be >= 1")
    kind = model.kind
    if kind == "circle":
        ev, mult = _torus_levels(1, count)
    elif kind == "torus":
        ev, mult = _torus_levels(model.dim, count)
    elif kind == "sphere":
        n = model.dim
        ev, mult = _levels_until(count, lambda ell: (ell * (ell + n - 1), sphere_multiplicity(n, ell)))
    elif kind == "interval":
        ev, mult = _levels_until(count, _interval_level(model.bc))
    else:
        ev, mult = _torus_levels(model.dim, count)
        # Delta^{d/2} on the flat torus; the zero level stays at 0
        ev = ev ** (model.order / 2)
    return Spectrum(ev, mult, count, source=model.label, model=model)


def merge_spectra(s1: Spectrum, s2: Spectrum) -> Spectrum:
    """Sorted union of two spectra, multiplicities summed on collisions.

    The merged count stops at the smaller of the two last materialized
    eigenvalues, beyond which one operand may be missing levels.
    """
    if s1.count == 0:
        return s2
    if s2.count == 0:
        return s1
    top = min(s1.last, s2.last)
    count = int(np.count_nonzero(s1.expanded() <= top) + np.count_nonzero(s2.expanded() <= top))
    values = np.concatenate([s1.eigenvalues, s2.eigenvalues])
    mults = np.concatenate([s1.multiplicities, s2.multiplicities])
    levels, inverse = np.unique(values, return_inverse=True)
    summed = np.zeros(levels.size, dtype=np.int64)
    np.add.at(summed, inverse, mults)
    return Spectrum(levels, summed, count, source=f"merge({s1.source}, {s2.source})")


@dataclass(frozen=True)
class WeylFit:
    """Least-squares fit lambda_mu ~ C * mu**q in log-log space."""

    q: float
    C: float
    residual: float
    tail_fraction: float
    count: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "q": float(f"{self.q:.12g}"),
                "C": float(f"{self.C:.12g}"),
                "residual": float(f"{self.residual:.12g}"),
                "tail_fraction": self.tail_fraction,
                "count": self.count,
            }
        )


def fit_power_law(values, tail_fraction: float = 0.5) -> WeylFit:
    """Fit values[mu-1] ~ C * mu**q on the trailing ``tail_fraction`` of indices."""
    values = np.asarray(values, dtype=float)
    if not 0 < tail_fraction <= 1:
        raise DomainError("tail_fraction must lie in (0, 1]")
    n = values.size
    start = int(math.floor(n * (1 - tail_fraction)))
    tail = values[start:]
    if tail.size < 2:
        raise FitError("tail window holds fewer than two points")
    if np.any(tail <= 0):
        raise FitError("non-positive eigenvalue in the tail window; shift the spectrum first")
    x = np.log(np.arange(start + 1, n + 1, dtype=float))
    y = np.log(tail)
    q, intercept = np.polyfit(x, y, 1)
    resid = y - (q * x + intercept)
    return WeylFit(float(q), float(math.exp(intercept)), float(np.sqrt(np.mean(resid**2))), tail_fraction, n)


def weyl_fit(s: Spectrum, tail_fraction: float = 0.5) -> WeylFit:
    if s.count < 100:
        raise FitError(f"need at least 100 eigenvalues for a Weyl fit, got {s.count}")
    return fit_power_law(s.expanded(), tail_fraction)


def counting_function(s: Spectrum, lam: float) -> int:
    """N(lam) = #{mu : lambda_mu <= lam} over the materialized range."""
    return int(np.searchsorted(s.expanded(), lam, side="right"))


def shifted_growth(s: Spectrum):
    """Spectrum-backed growth function with values lambda_mu + shift >= 1."""
    from .growth import SpectrumBacked

    ev = s.expanded()
    if ev.size == 0 or np.all(ev == ev[0]):
        raise DomainError("degenerate spectrum: all materialized eigenvalues are equal")
    shift = max(0.0, 1.0 - float(ev[0]))
    return SpectrumBacked(s, shift)
