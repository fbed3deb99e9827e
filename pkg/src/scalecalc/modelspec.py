"""Parser for model specifiers such as ``torus:2`` or ``map:n=2,d=4``."""
from __future__ import annotations

from .errors import DomainError
from .spectra import ManifoldModel


def _keyvals(body, spec):
    out = {}
    for part in body.split(","):
        key, sep, value = part.partition("=")
        if not sep:
            raise DomainError(f"expected key=value in {spec!r}")
        try:
            out[key.strip()] = int(value)
        except ValueError:
            raise DomainError(f"non-integer value in {spec!r}") from None
    return out


def split_spec(spec: str):
    name, _, body = spec.strip().partition(":")
    return name.lower(), body


def parse_manifold(spec: str) -> ManifoldModel:
    """Spectral model: circle, torus:n, sphere:n, interval:<bc>, orderd:n=..,d=.."""
    name, body = split_spec(spec)
    try:
        if name == "circle" and not body:
            return ManifoldModel("circle")
        if name in ("torus", "sphere"):
            return ManifoldModel(name, dim=int(body))
        if name == "interval":
            return ManifoldModel("interval", bc=(body or "dirichlet").lower())
        if name == "orderd":
            kv = _keyvals(body, spec)
            return ManifoldModel("orderd", dim=kv["n"], order=kv["d"])
    except (KeyError, ValueError) as exc:
        raise DomainError(f"bad model specifier {spec!r}: {exc}") from None
    raise DomainError(f"unknown model specifier {spec!r}")


def parse_mapping(spec: str):
    """``map:n=..[,d=..]`` as a (dim, order) pair."""
    name, body = split_spec(spec)
    if name != "map":
        raise DomainError(f"not a mapping-space specifier: {spec!r}")
    kv = _keyvals(body, spec)
    if "n" not in kv or set(kv) - {"n", "d"}:
        raise DomainError(f"map specifier needs n=<dim> and optional d=<order>: {spec!r}")
    return kv["n"], kv.get("d", 2)
