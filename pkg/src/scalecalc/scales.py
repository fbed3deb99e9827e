"""Fractal scale Hilbert spaces l^{2,f} at finite truncation.

A :class:`FractalModel` is determined by its growth function f; level k is
l^2 weighted by f**k. Isomorphism questions reduce to comparing growth
classes, and the local invariant maps a level pair (i, j), i < j, to [f^(j-i)].
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import growth as ga
from .errors import DimensionError, DomainError, FitError, OutsideLambdaError, TruncationError
from .modelspec import parse_manifold, parse_mapping, split_spec
from .spectra import enumerate_spectrum, shifted_growth

DEFAULT_COUNT = 10_000


@dataclass(frozen=True, eq=False)
class FractalModel:
    growth: ga.GrowthFunction
    label: str = ""
    k0: int | None = None
    absorbed_by: str | None = None

    def __post_init__(self):
        if self.growth.bounded:
            raise DomainError("a fractal model needs an unbounded growth function")

    def growth_class(self, horizon: int = ga.DEFAULT_HORIZON) -> ga.GrowthClass:
        return ga.classify(self.growth, horizon)

    def to_json(self) -> dict:
        return {"label": self.label, "k0": self.k0, "growth": ga.to_json(self.growth)}

    @classmethod
    def from_json(cls, obj) -> FractalModel:
        if isinstance(obj, str):
            obj = json.loads(obj)
        return cls(ga.from_json(obj["growth"]), obj.get("label", ""), obj.get("k0"))


@dataclass(frozen=True)
class TruncatedVector:
    coords: tuple

    def __post_init__(self):
        if len(self.coords) < 1:
            raise DimensionError("a truncated vector needs at least one coordinate")

    @property
    def truncation(self) -> int:
        return len(self.coords)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.coords, dtype=dtype or float)


def base_offset(n: int) -> int:
    """Smallest k0 with 2*k0 > n."""
    return n // 2 + 1


def mapping_space_model(n: int, d: int = 2) -> FractalModel:
    """Model of Map(N, M) (d = 2) or X_P(N, E) for an order-d operator, dim N = n."""
    if n < 1 or d < 1:
        raise DomainError("need n >= 1 and d >= 1")
    label = f"Map(N^{n},M)" if d == 2 else f"X_P(N^{n},E), ord P={d}"
    return FractalModel(ga.PowerLaw(1, Fraction(d, n)), label, base_offset(n))


def model_from_spec(spec: str, count: int = DEFAULT_COUNT) -> FractalModel:
    """``map:n=..,d=..`` and ``orderd:n=..,d=..`` give symbolic models; other
    spectral specifiers give spectrum-backed ones."""
    name, _ = split_spec(spec)
    if name == "map":
        return mapping_space_model(*parse_mapping(spec))
    model = parse_manifold(spec)
    if model.kind == "orderd":
        return mapping_space_model(model.dim, model.order)
    f = shifted_growth(enumerate_spectrum(model, count))
    return FractalModel(f, model.label, base_offset(model.dim))


def _coords(x):
    return np.asarray(x, dtype=float).ravel()


def level_weights(m: FractalModel, k: int, M: int) -> np.ndarray:
    if k < 0:
        raise DomainError("level must be nonnegative")
    if k == 0:
        return np.ones(M)
    return ga.power(m.growth, k).values(M)


def level_inner_product(m: FractalModel, k: int, x, y) -> float:
    """sum_{mu <= M} f(mu)**k * x_mu * y_mu."""
    x, y = _coords(x), _coords(y)
    if x.shape != y.shape:
        raise DimensionError(f"truncations differ: {x.size} vs {y.size}")
    return float(np.sum(level_weights(m, k, x.size) * x * y))


def level_norm(m: FractalModel, k: int, x) -> float:
    return level_inner_product(m, k, x, x) ** 0.5


def compact_inclusion_margin(m: FractalModel, k: int, tail_start: int) -> float:
    """Norm of the level k+1 -> k inclusion on coordinates >= tail_start, i.e. 1/f(tail_start)."""
    if tail_start < 1:
        raise DomainError("tail_start must be >= 1")
    if k < 0:
        raise DomainError("level must be nonnegative")
    return 1.0 / ga.evaluate(m.growth, tail_start)


def scale_product(m1: FractalModel, m2: FractalModel, count: int = DEFAULT_COUNT) -> FractalModel:
    """Product space; its growth is the star merge of both growth functions.

    The merged growth keeps the interleaving map (see :func:`interleaving`).
    ``absorbed_by`` names the factor whose class survives when both classes
    are exact.
    """
    g = ga.star(m1.growth, m2.growth, count)
    absorbed = None
    try:
        c1, c2 = ga.classify(m1.growth), ga.classify(m2.growth)
        if c1.exact and c2.exact:
            absorbed = m1.label if c1.exponent <= c2.exponent else m2.label
    except (FitError, TruncationError):
        pass
    k0 = max((k for k in (m1.k0, m2.k0) if k is not None), default=None)
    return FractalModel(g, f"{m1.label} x {m2.label}", k0, absorbed)


def interleaving(m: FractalModel):
    """Slot mu of the product -> (factor 0/1, coordinate index within that factor)."""
    g = m.growth
    if not isinstance(g, ga.ExplicitPrefix) or g.sources is None:
        raise DomainError("model is not a scale product")
    return np.stack([g.sources.astype(np.int64), g.source_index], axis=1)


def reindex(m: FractalModel, j: int) -> FractalModel:
    """H[j]: keep every j-th level, growth f**j."""
    if j < 1:
        raise DomainError("reindex needs j >= 1")
    if j == 1:
        return m
    return FractalModel(ga.power(m.growth, j), f"{m.label}[{j}]", m.k0)


@dataclass(frozen=True)
class InvariantTable:
    j_max: int
    entries: dict = field(repr=False)

    def __getitem__(self, ij):
        i, j = ij
        if not 0 <= i < j:
            raise OutsideLambdaError(f"({i}, {j}) is outside the index set i < j")
        if j > self.j_max:
            raise OutsideLambdaError(f"({i}, {j}) exceeds j_max={self.j_max}")
        return self.entries[(i, j)]

    def __len__(self):
        return len(self.entries)

    def to_json(self) -> dict:
        rows = []
        for (i, j), c in sorted(self.entries.items()):
            rows.append({"i": i, "j": j, "exponent": float(f"{float(c.exponent):.12g}"), "representative": c.label})
        return {"j_max": self.j_max, "entries": rows}


def invariant_table(m: FractalModel, j_max: int, horizon: int = ga.DEFAULT_HORIZON) -> InvariantTable:
    """(i, j) -> [f^(j-i)] for 0 <= i < j <= j_max."""
    if j_max < 1:
        raise DomainError("j_max must be >= 1")
    by_gap = {gap: ga.classify(ga.power(m.growth, gap), horizon) for gap in range(1, j_max + 1)}
    entries = {(i, j): by_gap[j - i] for j in range(1, j_max + 1) for i in range(j)}
    return InvariantTable(j_max, entries)


@dataclass(frozen=True)
class IsomorphismVerdict:
    isomorphic: bool | None
    mode: str
    certificate: dict

    def to_json(self) -> dict:
        return {"isomorphic": self.isomorphic, "mode": self.mode, "certificate": self.certificate}


def locally_isomorphic(m1: FractalModel, m2: FractalModel, tol: float = ga.DEFAULT_CLASS_TOL,
                       horizon: int = ga.DEFAULT_HORIZON) -> IsomorphismVerdict:
    """Decide l^{2,f1} ~ l^{2,f2} by comparing growth classes.

    Exact classes are compared symbolically; fitted ones within ``tol`` on the
    exponent. If either growth cannot be classified the verdict is None.
    """
    classes = []
    for m in (m1, m2):
        try:
            classes.append(m.growth_class(horizon))
        except (FitError, TruncationError) as exc:
            evidence = {"model": m.label, "reason": str(exc), "available": int(m.growth.available(horizon).size)}
            return IsomorphismVerdict(None, "undecided", evidence)
    c1, c2 = classes
    exact = c1.exact and c2.exact
    same = c1 == c2 if exact else c1.close_to(c2, tol)
    mode = "symbolic-exact" if exact else "prefix-numeric"
    if same:
        cert = {"class": c1.label, "exponent": float(c1.exponent)}
    else:
        cert = {"entry": [0, 1], "exponents": [float(c1.exponent), float(c2.exponent)],
                "classes": [c1.label, c2.label]}
    return IsomorphismVerdict(bool(same), mode, cert)
