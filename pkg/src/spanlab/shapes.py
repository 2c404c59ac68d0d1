"""Constructors for common domains and a strict JSON domain-file format.

Domain files are plain JSON.  Complex numbers are written as two-element
arrays ``[re, im]``.  Unknown keys are rejected so that a typo in a config
fails loudly instead of silently falling back to a default.

Top-level schema::

    {
      "outer":   {"kind": "circle", "center": [0, 0], "radius": 1.0},
      "holes":   [ {curve}, ... ],          # optional
      "anchors": [ [re, im], ... ],         # one per hole
      "nodes":   512                        # optional, per-curve sample count
    }

Curve kinds: ``circle`` (center, radius), ``ellipse`` (center, semi_axes,
rotation), ``fourier`` (coefficients as {"k": [re, im]}), ``polygon``
(vertices, smoothing).
"""

from __future__ import annotations

import json
from typing import Any

import numpy as np

from .domains import BoundaryCurve, Domain
from .errors import ConfigError, DomainError


def disk(center: complex = 0.0, radius: float = 1.0, nodes: int = 512) -> Domain:
    """The disk |z - center| < radius."""
    return Domain(circle_curve(center, radius, nodes=nodes))


def annulus(
    inner_radius: float,
    outer_radius: float = 1.0,
    center: complex = 0.0,
    nodes: int = 512,
) -> Domain:
    """The annulus inner_radius < |z - center| < outer_radius."""
    if not 0.0 < inner_radius < outer_radius:
        raise DomainError("annulus needs 0 < inner_radius < outer_radius")
    return Domain(
        outer=circle_curve(center, outer_radius, nodes=nodes),
        holes=[circle_curve(center, inner_radius, orientation=-1, nodes=nodes)],
        anchors=[center],
    )


def ellipse(
    center: complex = 0.0,
    semi_axes: tuple[float, float] = (1.0, 0.5),
    rotation: float = 0.0,
    nodes: int = 512,
) -> Domain:
    a, b = semi_axes
    if a <= 0 or b <= 0:
        raise DomainError("ellipse semi-axes must be positive")
    rot = np.exp(1j * rotation)
    return Domain(
        BoundaryCurve(
            {
                0: complex(center),
                1: rot * (a + b) / 2.0,
                -1: rot * (a - b) / 2.0,
            },
            nodes=nodes,
        )
    )


def circle_curve(
    center: complex, radius: float, orientation: int = 1, nodes: int = 512
) -> BoundaryCurve:
    if radius <= 0:
        raise DomainError("circle radius must be positive")
    if orientation not in (1, -1):
        raise DomainError("orientation must be +1 (ccw) or -1 (cw)")
    return BoundaryCurve({0: complex(center), orientation: radius}, nodes=nodes)


def smoothed_polygon_curve(
    vertices: list[complex],
    smoothing: float = 0.02,
    modes: int = 64,
    nodes: int = 512,
) -> BoundaryCurve:
    """Fourier smoothing of a closed polygon.

    The polygon is traversed at unit speed per edge, sampled densely, the
    Fourier coefficients are damped by a Gaussian factor exp(-smoothing k^2)
    and truncated to ``modes`` modes each way.  The result is a real-analytic
    curve close to the polygon away from the (rounded) corners.
    """
    verts = np.asarray(vertices, dtype=complex)
    if verts.size < 3:
        raise DomainError("polygon needs at least 3 vertices")
    dense = 4096
    t = np.linspace(0.0, verts.size, dense, endpoint=False)
    base = np.floor(t).astype(int) % verts.size
    frac = t - np.floor(t)
    path = verts[base] * (1.0 - frac) + verts[(base + 1) % verts.size] * frac
    coeffs_full = np.fft.fft(path) / dense
    ks = np.fft.fftfreq(dense, d=1.0 / dense).astype(int)
    damp = np.exp(-smoothing * ks.astype(float) ** 2)
    coefficients: dict[int, complex] = {}
    for k, c, d in zip(ks, coeffs_full, damp):
        if abs(k) <= modes and abs(c * d) > 1e-14:
            coefficients[int(k)] = complex(c * d)
    return BoundaryCurve(coefficients, nodes=nodes)


# -- JSON loading -----------------------------------------------------------


def _as_complex(value: Any, where: str) -> complex:
    if (
        not isinstance(value, (list, tuple))
        or len(value) != 2
        or not all(isinstance(v, (int, float)) for v in value)
    ):
        raise ConfigError(f"{where}: expected a complex number as [re, im], got {value!r}")
    return complex(value[0], value[1])


def _check_keys(obj: dict, allowed: set[str], required: set[str], where: str) -> None:
    extra = set(obj) - allowed
    if extra:
        raise ConfigError(f"{where}: unknown keys {sorted(extra)}")
    missing = required - set(obj)
    if missing:
        raise ConfigError(f"{where}: missing keys {sorted(missing)}")


def curve_from_dict(obj: dict, nodes: int, orientation: int, where: str) -> BoundaryCurve:
    if not isinstance(obj, dict):
        raise ConfigError(f"{where}: expected an object")
    kind = obj.get("kind")
    if kind == "circle":
        _check_keys(obj, {"kind", "center", "radius"}, {"kind", "center", "radius"}, where)
        return circle_curve(
            _as_complex(obj["center"], where),
            float(obj["radius"]),
            orientation=orientation,
            nodes=nodes,
        )
    if kind == "ellipse":
        _check_keys(
            obj,
            {"kind", "center", "semi_axes", "rotation"},
            {"kind", "center", "semi_axes"},
            where,
        )
        if orientation != 1:
            raise ConfigError(f"{where}: ellipse holes are not supported yet")
        dom = ellipse(
            _as_complex(obj["center"], where),
            tuple(float(v) for v in obj["semi_axes"]),
            rotation=float(obj.get("rotation", 0.0)),
            nodes=nodes,
        )
        return dom.outer
    if kind == "fourier":
        _check_keys(obj, {"kind", "coefficients"}, {"kind", "coefficients"}, where)
        raw = obj["coefficients"]
        if not isinstance(raw, dict):
            raise ConfigError(f"{where}: coefficients must be an object")
        coeffs = {}
        for key, val in raw.items():
            try:
                k = int(key)
            except ValueError:
                raise ConfigError(f"{where}: bad wavenumber {key!r}") from None
            coeffs[k] = _as_complex(val, f"{where}.coefficients[{key}]")
        return BoundaryCurve(coeffs, nodes=nodes)
    if kind == "polygon":
        _check_keys(
            obj,
            {"kind", "vertices", "smoothing", "modes"},
            {"kind", "vertices"},
            where,
        )
        verts = [_as_complex(v, f"{where}.vertices") for v in obj["vertices"]]
        return smoothed_polygon_curve(
            verts,
            smoothing=float(obj.get("smoothing", 0.02)),
            modes=int(obj.get("modes", 64)),
            nodes=nodes,
        )
    raise ConfigError(f"{where}: unknown curve kind {kind!r}")


def domain_from_dict(obj: dict) -> Domain:
    if not isinstance(obj, dict):
        raise ConfigError("domain: expected a JSON object")
    _check_keys(obj, {"outer", "holes", "anchors", "nodes"}, {"outer"}, "domain")
    nodes = int(obj.get("nodes", 512))
    outer = curve_from_dict(obj["outer"], nodes, orientation=1, where="domain.outer")
    holes_raw = obj.get("holes", [])
    anchors_raw = obj.get("anchors", [])
    if len(holes_raw) != len(anchors_raw):
        raise ConfigError("domain: need exactly one anchor per hole")
    holes = [
        curve_from_dict(h, nodes, orientation=-1, where=f"domain.holes[{i}]")
        for i, h in enumerate(holes_raw)
    ]
    anchors = [_as_complex(a, f"domain.anchors[{i}]") for i, a in enumerate(anchors_raw)]
    return Domain(outer=outer, holes=holes, anchors=anchors)


def load_domain(path: str) -> Domain:
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return domain_from_dict(obj)
