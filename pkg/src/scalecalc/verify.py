"""Batch verification suites; each returns a list of :class:`Check` rows."""
from __future__ import annotations

import math
import os
from dataclasses import asdict, dataclass
from fractions import Fraction

import numpy as np

from . import fourier, growth as ga, scales
from .spectra import ManifoldModel, enumerate_spectrum, flat_torus, merge_spectra, weyl_fit

DEFAULT_SEED = 20240917
REL_SLACK = 1e-12


def default_seed() -> int:
    return int(os.environ.get("SCALECALC_SEED", DEFAULT_SEED))


@dataclass
class Check:
    name: str
    measured: float
    tolerance: float
    passed: bool
    detail: str = ""

    def as_dict(self):
        d = asdict(self)
        d["measured"] = float(f"{self.measured:.12g}")
        return d


def gram_suite(modes: int = 32, k_max: int = 3, off_tol: float = 1e-10, diag_rtol: float = 1e-8) -> list[Check]:
    idx = list(range(1, modes + 1))
    lam = [int(v) for v in fourier.mode_eigenvalue(np.array(idx))]
    out = []
    for k in range(k_max + 1):
        G = fourier.gram_matrix(idx, k)
        off = float(np.abs(G - np.diag(np.diag(G))).max()) if modes > 1 else 0.0
        expected = np.array([fourier.weight_sum(v, k) for v in lam], dtype=float)
        rel = float(np.max(np.abs(np.diag(G) - expected) / expected))
        out.append(Check(f"gram k={k} off-diagonal", off, off_tol, off < off_tol))
        out.append(Check(f"gram k={k} diagonal", rel, diag_rtol, rel <= diag_rtol))
    return out


def weyl_suite(model: ManifoldModel, count: int = 10_000, tail_fraction: float = 0.5, tol: float = 0.05) -> list[Check]:
    fit = weyl_fit(enumerate_spectrum(model, count), tail_fraction)
    err = abs(fit.q - model.weyl_exponent)
    detail = f"q={fit.q:.6f} expected {model.weyl_exponent:.6f}"
    return [Check(f"weyl {model.label}", err, tol, err <= tol, detail)]


def perturbed_power_law(rng, f: ga.PowerLaw, c: float, length: int) -> ga.ExplicitPrefix:
    """Nondecreasing g with f/c <= g <= c*f on 1..length.

    Sorting f(mu)*r_mu with r_mu in [1/c, c] keeps both bounds: the i-th
    smallest value is <= c*f(i) (i candidates below it) and >= f(i)/c.
    """
    r = np.exp(rng.uniform(-math.log(c), math.log(c), length))
    return ga.ExplicitPrefix(np.sort(f.values(length) * r), f.exponent)


def equivalence_trial(rng, prefix: int = 1000):
    """One random (f, f', h) triple; returns (ok, c, first bad mu or None)."""
    f = ga.PowerLaw(rng.uniform(0.5, 3.0), rng.uniform(0.25, 3.0))
    h = ga.PowerLaw(rng.uniform(0.5, 3.0), rng.uniform(0.25, 3.0))
    c = float(rng.uniform(1.01, 4.0))
    fp = perturbed_power_law(rng, f, c, prefix)
    fh = ga.star(f, h, prefix).prefix
    fph = ga.star(fp, h, prefix).prefix
    lo = fph / c * (1 - REL_SLACK)
    hi = fph * c * (1 + REL_SLACK)
    bad = np.nonzero((fh < lo) | (fh > hi))[0]
    return bad.size == 0, c, (int(bad[0]) + 1 if bad.size else None)


def star_suite(trials: int = 200, prefix: int = 1000, seed: int | None = None) -> list[Check]:
    rng = np.random.default_rng(default_seed() if seed is None else seed)
    failures, first = 0, ""
    for t in range(trials):
        ok, c, mu = equivalence_trial(rng, prefix)
        if not ok:
            failures += 1
            first = first or f"trial {t}: c={c:.4f} fails at mu={mu}"
    out = [Check("star c-equivalence (random triples)", failures, 0, failures == 0, first)]
    f, g, h = ga.PowerLaw(1, 1), ga.PowerLaw(2, Fraction(3, 2)), ga.PowerLaw(1, 2)
    comm = np.array_equal(ga.star(f, h, prefix).prefix, ga.star(h, f, prefix).prefix)
    left = ga.star(ga.star(f, g, prefix), h, prefix).prefix
    right = ga.star(f, ga.star(g, h, prefix), prefix).prefix
    assoc = np.array_equal(left, right)
    out.append(Check("star commutative", float(not comm), 0, comm))
    out.append(Check("star associative", float(not assoc), 0, assoc))
    return out


def idempotent_suite(exponents=(1, 2, 3), horizon: int = 100_000) -> list[Check]:
    out = []
    for k in exponents:
        rep = ga.idempotency_check(ga.PowerLaw(1, k), horizon)
        detail = "" if rep.passed else f"violations at mu={rep.violations[:5]} floor identity={rep.floor_identity}"
        out.append(Check(f"idempotent mu^{k}", len(rep.violations), 0, rep.passed, detail))
    return out


def product_suite(n1: int, n2: int, count: int = 10_000, tol: float = 0.05) -> list[Check]:
    """Product of dimension-n1 and dimension-n2 mapping spaces keeps the larger-dimension class."""
    expected = Fraction(2, max(n1, n2))
    m1, m2 = scales.mapping_space_model(n1), scales.mapping_space_model(n2)
    symbolic = scales.scale_product(m1, m2, count).growth_class()
    out = [Check(f"product n1={n1} n2={n2} symbolic", float(abs(symbolic.exponent - expected)), 0,
                 symbolic.exponent == expected, symbolic.label)]
    fit = ga.fit_class(scales.scale_product(m1, m2, count).growth, count)
    err = abs(float(fit.exponent) - float(expected))
    out.append(Check(f"product n1={n1} n2={n2} power-law merge fit", err, tol, err <= tol, f"q={float(fit.exponent):.6f}"))
    merged = merge_spectra(enumerate_spectrum(flat_torus(n1), count), enumerate_spectrum(flat_torus(n2), count))
    q = weyl_fit(merged).q
    err = abs(q - float(expected))
    out.append(Check(f"product n1={n1} n2={n2} spectrum merge fit", err, tol, err <= tol, f"q={q:.6f}"))
    return out


def bounds_suite(k0_max: int = 3, modes: int = 1000) -> list[Check]:
    """Exact integer check of lam^k0 <= sum_{j<=k0} lam^j <= (1+k0) lam^k0 on circle modes."""
    out = []
    for k0 in range(1, k0_max + 1):
        bad = [m * m for m in range(1, modes + 1) if not fourier.weight_bound_holds(m * m, k0)]
        out.append(Check(f"weight bound k0={k0}", len(bad), 0, not bad, f"first failing lambda={bad[0]}" if bad else ""))
    return out


def all_passed(checks) -> bool:
    return all(c.passed for c in checks)
