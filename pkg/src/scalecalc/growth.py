"""Growth functions f: N -> (0, inf), their classes and the *-operation.

Three concrete kinds exist: ``PowerLaw`` (a * mu**p, handled symbolically),
``SpectrumBacked`` (shifted eigenvalues of a model operator) and
``ExplicitPrefix`` (stored values plus a declared tail exponent). Indices are
1-based throughout, matching mu in N.
"""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from .errors import DomainError, FitError, TruncationError, UnsupportedClassError
from .spectra import Spectrum, WeylFit, enumerate_spectrum, fit_power_law

DEFAULT_CLASS_TOL = 0.05
DEFAULT_HORIZON = 10_000


def _exact(p):
    """Keep rationals exact; everything else becomes float."""
    if isinstance(p, Rational):
        return Fraction(p)
    if isinstance(p, float) and p.is_integer():
        return Fraction(int(p))
    return float(p)


def format_exponent(p) -> str:
    if isinstance(p, Fraction):
        return str(p.numerator) if p.denominator == 1 else f"{p.numerator}/{p.denominator}"
    return f"{p:.12g}"


def _frozen(arr, dtype=float):
    arr = np.array(arr, dtype=dtype)
    arr.setflags(write=False)
    return arr


class GrowthFunction:
    """Common interface: ``values(n)`` gives f(1..n) as a float array."""

    kind = "abstract"

    def values(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def available(self, n: int) -> np.ndarray:
        """Up to n leading values; may return fewer when materialization is finite."""
        return self.values(n)

    def __call__(self, mu: int) -> float:
        return evaluate(self, mu)

    @property
    def bounded(self) -> bool:
        return False


@dataclass(frozen=True)
class PowerLaw(GrowthFunction):
    coefficient: float = 1
    exponent: Fraction | float = 1

    kind = "PowerLaw"

    def __post_init__(self):
        object.__setattr__(self, "exponent", _exact(self.exponent))
        if not self.coefficient > 0:
            raise DomainError("power-law coefficient must be positive")
        if self.exponent < 0:
            raise DomainError("power-law exponent must be positive")
        if self.exponent == 0 and self.coefficient != 1:
            raise DomainError("exponent 0 is reserved for the constant-1 level-0 weight")

    @property
    def bounded(self) -> bool:
        return self.exponent == 0

    def values(self, n):
        mu = np.arange(1, n + 1, dtype=float)
        p = self.exponent
        if isinstance(p, Fraction) and p.denominator == 1:
            return self.coefficient * mu ** int(p)
        return self.coefficient * mu ** float(p)


@dataclass(frozen=True, eq=False)
class SpectrumBacked(GrowthFunction):
    """f(mu) = (lambda_mu + shift) ** power."""

    spectrum: Spectrum
    shift: float = 0.0
    power: int = 1

    kind = "SpectrumBacked"

    def _eigen(self, n):
        s = self.spectrum
        if n > s.count and s.model is not None:
            s = enumerate_spectrum(s.model, n)
        return s.expanded()[:n]

    def available(self, n):
        return (self._eigen(n) + self.shift) ** self.power

    def values(self, n):
        vals = self.available(n)
        if vals.size < n:
            raise TruncationError(f"spectrum {self.spectrum.source} has too few eigenvalues", vals.size)
        return vals

    @property
    def bounded(self) -> bool:
        return self.power == 0


@dataclass(frozen=True, eq=False)
class ExplicitPrefix(GrowthFunction):
    """Stored values f(1..L); beyond L, f(mu) = f(L) * (mu / L) ** tail_exponent.

    ``sources``/``source_index`` are set by :func:`star` and record which
    operand each merged value came from (0 = left, 1 = right).
    """

    prefix: np.ndarray
    tail_exponent: Fraction | float = 1
    tail_exact: bool = True
    sources: np.ndarray | None = field(default=None, repr=False)
    source_index: np.ndarray | None = field(default=None, repr=False)

    kind = "ExplicitPrefix"

    def __post_init__(self):
        prefix = _frozen(self.prefix)
        if prefix.ndim != 1 or prefix.size == 0:
            raise DomainError("prefix must be a non-empty 1-d sequence")
        if np.any(prefix <= 0):
            raise DomainError("growth values must be positive")
        if np.any(np.diff(prefix) < 0):
            raise DomainError("growth values must be nondecreasing")
        object.__setattr__(self, "prefix", prefix)
        object.__setattr__(self, "tail_exponent", _exact(self.tail_exponent))
        if self.sources is not None:
            object.__setattr__(self, "sources", _frozen(self.sources, np.int8))
            object.__setattr__(self, "source_index", _frozen(self.source_index, np.int64))

    @property
    def bounded(self) -> bool:
        return self.tail_exponent == 0

    def available(self, n):
        # a fitted (inexact) tail is a guess, so only stored values count as data
        if self.tail_exact:
            return self.values(n)
        return self.prefix[:n].copy()

    def values(self, n):
        L = self.prefix.size
        if n <= L:
            return self.prefix[:n].copy()
        mu = np.arange(L + 1, n + 1, dtype=float)
        tail = self.prefix[-1] * (mu / L) ** float(self.tail_exponent)
        return np.concatenate([self.prefix, tail])


@dataclass(frozen=True, eq=False)
class GrowthClass:
    """Equivalence class [f], identified by its power-law exponent.

    ``exact`` classes compare by exponent equality; numerically fitted classes
    carry the fit and compare with :meth:`close_to`.
    """

    exponent: Fraction | float
    exact: bool = True
    representative: GrowthFunction | None = None
    fit: WeylFit | None = None

    def __post_init__(self):
        object.__setattr__(self, "exponent", _exact(self.exponent) if self.exact else float(self.exponent))

    def __eq__(self, other):
        if not isinstance(other, GrowthClass):
            return NotImplemented
        return self.exponent == other.exponent

    def __hash__(self):
        return hash(self.exponent)

    def close_to(self, other: GrowthClass, tol: float = DEFAULT_CLASS_TOL) -> bool:
        return abs(float(self.exponent) - float(other.exponent)) <= tol

    @property
    def label(self) -> str:
        return f"[mu^{format_exponent(self.exponent)}]"

    def __repr__(self):
        tag = "" if self.exact else "~"
        return f"GrowthClass({tag}{self.label})"


def power_class(p) -> GrowthClass:
    return GrowthClass(p, True, PowerLaw(1, p))


def evaluate(f: GrowthFunction, mu: int) -> float:
    if mu < 1:
        raise DomainError(f"growth functions are indexed from 1, got {mu}")
    return float(f.values(mu)[mu - 1])


def power(f: GrowthFunction, k: int) -> GrowthFunction:
    """Pointwise k-th power f**k; k = 0 gives the constant-1 level-0 weight."""
    if k < 0:
        raise DomainError("power must be nonnegative")
    if k == 1:
        return f
    if isinstance(f, PowerLaw):
        return PowerLaw(f.coefficient**k, f.exponent * k)
    if isinstance(f, SpectrumBacked):
        return SpectrumBacked(f.spectrum, f.shift, f.power * k)
    if isinstance(f, ExplicitPrefix):
        return ExplicitPrefix(f.prefix**k, f.tail_exponent * k, f.tail_exact)
    raise UnsupportedClassError(f"cannot raise {type(f).__name__} to a power")


def merge_sorted(left: np.ndarray, right: np.ndarray):
    """Stable merge of two nondecreasing arrays, left values first on ties.

    Returns (values, sources, source_index) with sources 0 for left, 1 for right
    and source_index the 1-based position inside the originating operand.
    """
    both = np.concatenate([left, right])
    order = np.argsort(both, kind="stable")
    sources = (order >= left.size).astype(np.int8)
    source_index = np.where(sources == 0, order, order - left.size) + 1
    return both[order], sources, source_index


def star(f: GrowthFunction, h: GrowthFunction, count: int) -> ExplicitPrefix:
    """First ``count`` values of f*h, the sorted merge of both value multisets."""
    if count < 1:
        raise DomainError("count must be >= 1")
    left, right = f.available(count), h.available(count)
    for name, vals in (("left", left), ("right", right)):
        if vals.size and np.any(np.diff(vals) < 0):
            raise DomainError(f"{name} operand is not nondecreasing")
    merged, sources, index = merge_sorted(left, right)
    safe = merged.size
    # an operand cut short can only vouch for merged values up to its last value
    for vals in (left, right):
        if vals.size < count:
            top = vals[-1] if vals.size else -math.inf
            safe = min(safe, int(np.searchsorted(merged, top, side="right")))
    if safe < count:
        raise TruncationError("not enough materialized values for the star prefix", safe)
    merged = merged[:count]
    tail, exact = _tail_class(f, h, merged)
    return ExplicitPrefix(merged, tail, exact, sources[:count], index[:count])


def _tail_class(f, h, merged):
    exact_kinds = all(isinstance(g, PowerLaw) or (isinstance(g, ExplicitPrefix) and g.tail_exact) for g in (f, h))
    if exact_kinds:
        return star_class(classify(f), classify(h)).exponent, True
    if merged.size >= 100 and merged[merged.size // 2] > 0:
        return max(fit_power_law(merged).q, 0.0), False
    return 1, False


def star_csv(p: ExplicitPrefix) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["index", "value", "source"])
    sources = p.sources if p.sources is not None else np.zeros(p.prefix.size, dtype=np.int8)
    for i, (v, s) in enumerate(zip(p.prefix, sources), 1):
        writer.writerow([i, f"{v:.12g}", "right" if s else "left"])
    return buf.getvalue()


def classify(f: GrowthFunction, horizon: int = DEFAULT_HORIZON) -> GrowthClass:
    """Class of f: exact for power laws and exact-tailed prefixes, fitted otherwise."""
    if isinstance(f, PowerLaw):
        return GrowthClass(f.exponent, True, f)
    if isinstance(f, ExplicitPrefix) and f.tail_exact:
        return GrowthClass(f.tail_exponent, True, f)
    return fit_class(f, horizon)


def fit_class(f: GrowthFunction, horizon: int = DEFAULT_HORIZON, tail_fraction: float = 0.5) -> GrowthClass:
    """Numeric class from a log-log fit over the tail of the first ``horizon`` values."""
    vals = f.available(horizon)
    if vals.size < 100:
        raise FitError(f"need at least 100 values to classify, got {vals.size}")
    fit = fit_power_law(vals, tail_fraction)
    return GrowthClass(fit.q, False, f, fit)


def star_class(c1: GrowthClass, c2: GrowthClass) -> GrowthClass:
    """[f] * [h] for power-law classes: the smaller exponent absorbs the other."""
    for c in (c1, c2):
        if not c.exact:
            raise UnsupportedClassError("star_class needs exact power-law classes; use star + fit_class")
    winner = c1 if c1.exponent <= c2.exponent else c2
    return GrowthClass(winner.exponent, True, PowerLaw(1, winner.exponent))


def leq_class(c1: GrowthClass, c2: GrowthClass, tol: float = DEFAULT_CLASS_TOL) -> bool:
    """[f1] <= [f2]; fitted classes get ``tol`` slack on the exponent."""
    if c1.exact and c2.exact:
        return c1.exponent <= c2.exponent
    return float(c1.exponent) <= float(c2.exponent) + tol


@dataclass(frozen=True)
class EquivalenceVerdict:
    related: bool
    constant: float
    tested_prefix: int
    mode: str
    doubling_growth: float | None = None


def _ratio_constant(a, b):
    return float(max(np.max(a / b), np.max(b / a)))


def equivalent(f: GrowthFunction, h: GrowthFunction, prefix: int = DEFAULT_HORIZON,
               tol: float = DEFAULT_CLASS_TOL) -> EquivalenceVerdict:
    """Decide f ~ h.

    Two power laws are decided exactly. Otherwise ``constant`` is the worst
    two-sided ratio over mu <= prefix, and the pair counts as related when
    doubling the prefix grows that constant by at most a factor 2**tol (a
    power-law drift mu**delta would grow it by 2**delta).
    """
    if prefix < 1:
        raise DomainError("prefix must be >= 1")
    if isinstance(f, PowerLaw) and isinstance(h, PowerLaw):
        related = f.exponent == h.exponent
        c = max(f.coefficient / h.coefficient, h.coefficient / f.coefficient) if related else math.inf
        return EquivalenceVerdict(related, c, prefix, "symbolic-exact", 1.0 if related else None)
    a, b = f.values(prefix), h.values(prefix)
    c = _ratio_constant(a, b)
    half = max(1, prefix // 2)
    growth = c / _ratio_constant(a[:half], b[:half])
    related = math.isfinite(c) and growth <= 2.0**tol
    return EquivalenceVerdict(related, c, prefix, "prefix-numeric", growth)


@dataclass
class IdempotencyReport:
    exponent: int
    horizon: int
    passed: bool
    floor_identity: bool
    violations: list = field(default_factory=list)

    def raise_if_failed(self):
        if not self.passed:
            mu = self.violations[0] if self.violations else None
            raise AssertionError(f"f*f bound violated for mu^{self.exponent} at mu={mu}")


def idempotency_check(f: PowerLaw, horizon: int) -> IdempotencyReport:
    """Check (1/2)^k f <= f*f <= 2^k f and f*f(mu) = f(floor((mu-1)/2) + 1)."""
    if not (isinstance(f, PowerLaw) and f.coefficient == 1 and f.exponent > 0):
        raise UnsupportedClassError("idempotency_check needs mu**k with coefficient 1")
    k = f.exponent
    ff = star(f, f, horizon).prefix
    fv = f.values(horizon)
    lo, hi = 0.5**k, 2.0**k
    lo, hi = float(lo), float(hi)
    bad = np.nonzero((ff < lo * fv) | (ff > hi * fv))[0] + 1
    mu = np.arange(1, horizon + 1)
    floor_ok = bool(np.array_equal(ff, fv[(mu - 1) // 2]))
    return IdempotencyReport(k, horizon, bad.size == 0 and floor_ok, floor_ok, bad[:20].tolist())


def to_json(f: GrowthFunction) -> dict:
    if isinstance(f, PowerLaw):
        return {"kind": f.kind, "params": {"coefficient": f.coefficient, "exponent": format_exponent(f.exponent)}}
    if isinstance(f, SpectrumBacked):
        params = {"model": f.spectrum.source, "count": f.spectrum.count, "shift": f.shift, "power": f.power}
        return {"kind": f.kind, "params": params}
    if isinstance(f, ExplicitPrefix):
        params = {"tail_exponent": format_exponent(f.tail_exponent), "tail_exact": f.tail_exact}
        return {"kind": f.kind, "params": params, "prefix": [float(v) for v in f.prefix]}
    raise UnsupportedClassError(type(f).__name__)


def _parse_exponent(text):
    return Fraction(text) if isinstance(text, str) and "." not in text and "e" not in text else float(text)


def from_json(obj) -> GrowthFunction:
    if isinstance(obj, str):
        obj = json.loads(obj)
    kind, params = obj["kind"], obj.get("params", {})
    if kind == "PowerLaw":
        return PowerLaw(params["coefficient"], _parse_exponent(params["exponent"]))
    if kind == "ExplicitPrefix":
        return ExplicitPrefix(obj["prefix"], _parse_exponent(params["tail_exponent"]), params.get("tail_exact", True))
    if kind == "SpectrumBacked":
        from .modelspec import parse_manifold

        model = parse_manifold(params["model"])
        return SpectrumBacked(enumerate_spectrum(model, params["count"]), params["shift"], params.get("power", 1))
    raise UnsupportedClassError(f"unknown growth kind {kind!r}")
