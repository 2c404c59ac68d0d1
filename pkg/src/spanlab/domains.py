"""Finitely connected planar domains bounded by smooth closed curves.

A boundary curve is stored as a trigonometric polynomial

    gamma(t) = sum_k c_k exp(i k t),   t in [0, 2 pi),

together with M equispaced sample nodes.  Derivatives, normals and quadrature
weights all come from the coefficients, so boundary data is spectrally
accurate; there is no polygonal approximation anywhere in the geometry layer.

Orientation convention: the outer curve runs counterclockwise, hole curves run
clockwise, so the concatenation of all curves is the positively oriented
boundary cycle of the domain.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.spatial.distance import cdist

from .errors import DomainError, EmptyClipError

# Containment tolerance band: points closer than BAND_FACTOR * diameter to a
# boundary curve are treated as boundary points by operations that require
# strict interiority.
BAND_FACTOR = 1e-8


class BoundaryCurve:
    """Closed trigonometric-polynomial curve with equispaced sample nodes."""

    def __init__(self, coefficients: dict[int, complex], nodes: int = 512):
        if nodes < 16:
            raise DomainError("a boundary curve needs at least 16 nodes")
        ks = np.array(sorted(coefficients), dtype=int)
        cs = np.array([coefficients[int(k)] for k in ks], dtype=complex)
        keep = np.abs(cs) > 0.0
        if not np.any(keep[ks != 0]):
            raise DomainError("curve has no nonconstant Fourier mode")
        self.wavenumbers = ks[keep]
        self.coefficients = cs[keep]
        self.nodes = int(nodes)
        self.params = np.arange(self.nodes) * (2.0 * np.pi / self.nodes)
        self.points = self.point(self.params)
        self.velocities = self.derivative(self.params, 1)
        self.speed = np.abs(self.velocities)
        if np.min(self.speed) <= 0.0:
            raise DomainError("curve parametrization has a stationary point")
        # outward normal for a counterclockwise curve; for a clockwise hole
        # curve the same formula points out of the domain (into the hole)
        self.normals = -1j * self.velocities / self.speed
        dt = 2.0 * np.pi / self.nodes
        self.weights = dt * self.speed
        self.complex_weights = dt * self.velocities

    # -- evaluation ---------------------------------------------------------

    def point(self, t) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        phases = np.exp(1j * np.multiply.outer(self.wavenumbers, t))
        return np.tensordot(self.coefficients, phases, axes=(0, 0))

    def derivative(self, t, order: int = 1) -> np.ndarray:
        t = np.asarray(t, dtype=float)
        factors = (1j * self.wavenumbers) ** order * self.coefficients
        phases = np.exp(1j * np.multiply.outer(self.wavenumbers, t))
        return np.tensordot(factors, phases, axes=(0, 0))

    def resample(self, nodes: int) -> "BoundaryCurve":
        return BoundaryCurve(
            {int(k): complex(c) for k, c in zip(self.wavenumbers, self.coefficients)},
            nodes=nodes,
        )

    # -- derived quantities -------------------------------------------------

    @property
    def center_coefficient(self) -> complex:
        mask = self.wavenumbers == 0
        return complex(self.coefficients[mask][0]) if np.any(mask) else 0.0 + 0.0j

    def signed_area(self) -> float:
        # A = (1/2i) oint conj(z) dz, positive for counterclockwise curves
        val = np.sum(np.conj(self.points) * self.complex_weights) / (2.0j)
        return float(val.real)

    def radius_bound(self) -> float:
        return float(np.max(np.abs(self.points - self.center_coefficient)))

    def circle_data(self, tol: float = 1e-12):
        """Return ``(center, radius, orientation)`` if the curve is a circle.

        A circle is a single Fourier mode ``c_0 + c_s e^{i s t}`` with
        ``s = +-1``; anything else returns ``None``.  ``tol`` is relative to
        the dominant mode.
        """
        center = self.center_coefficient
        scale = float(np.max(np.abs(self.coefficients)))
        rad = None
        orient = 0
        for k, c in zip(self.wavenumbers, self.coefficients):
            if k == 0:
                continue
            if k in (1, -1) and abs(c) > tol * scale:
                if rad is not None:
                    return None
                rad = abs(c)
                orient = int(k)
            elif abs(c) > tol * scale:
                return None
        if rad is None:
            return None
        return center, float(rad), orient

    def nearest_parameter(self, z: complex) -> float:
        """Parameter of the curve point nearest to ``z`` (Newton-refined)."""
        i0 = int(np.argmin(np.abs(self.points - z)))
        t = float(self.params[i0])
        spacing = 2.0 * np.pi / self.nodes
        for _ in range(30):
            g = complex(self.point(t))
            g1 = complex(self.derivative(t, 1))
            g2 = complex(self.derivative(t, 2))
            f1 = 2.0 * ((g - z) * np.conj(g1)).real
            f2 = 2.0 * (abs(g1) ** 2 + ((g - z) * np.conj(g2)).real)
            if f2 <= 0.0:
                break
            step = f1 / f2
            t -= step
            if abs(step) < 1e-15:
                break
        # guard: Newton must not have wandered past the neighbouring nodes
        t_wrapped = t % (2.0 * np.pi)
        sep = abs((t_wrapped - self.params[i0] + np.pi) % (2.0 * np.pi) - np.pi)
        if sep > 2.0 * spacing:
            fine = self.params[i0] + np.linspace(-spacing, spacing, 65)
            vals = self.point(fine)
            t_wrapped = float(fine[int(np.argmin(np.abs(vals - z)))] % (2.0 * np.pi))
        return t_wrapped

    def distance_to(self, z: complex) -> tuple[float, float]:
        """(distance, parameter) of the nearest curve point to ``z``."""
        t = self.nearest_parameter(z)
        return abs(complex(self.point(t)) - z), t


def _validation_polyline(curve: BoundaryCurve) -> np.ndarray:
    """Curve nodes thinned to at most ~1024 points for the crossing test."""
    step = max(1, curve.nodes // 1024)
    return curve.points[::step]


def _segments_cross(pts_a: np.ndarray, pts_b: np.ndarray | None = None) -> bool:
    """Strict transversal crossing between closed-polyline segments.

    With one argument, tests the polyline against itself (adjacent segment
    pairs excluded); with two, tests every segment of one against every
    segment of the other.  Grazing contact is deliberately not flagged here;
    the pointwise distance check above handles near-tangency with a
    tolerance.
    """
    a0 = pts_a
    a1 = np.roll(pts_a, -1)
    if pts_b is None:
        b0, b1 = a0, a1
    else:
        b0, b1 = pts_b, np.roll(pts_b, -1)
    u = (a1 - a0)[:, None]
    v = (b1 - b0)[None, :]
    d1 = np.imag(np.conj(u) * (b0[None, :] - a0[:, None]))
    d2 = np.imag(np.conj(u) * (b1[None, :] - a0[:, None]))
    d3 = np.imag(np.conj(v) * (a0[:, None] - b0[None, :]))
    d4 = np.imag(np.conj(v) * (a1[:, None] - b0[None, :]))
    crossing = (d1 * d2 < 0.0) & (d3 * d4 < 0.0)
    if pts_b is None:
        n = pts_a.size
        idx = np.arange(n)
        gap = np.abs(idx[:, None] - idx[None, :])
        crossing &= np.minimum(gap, n - gap) > 1
    return bool(np.any(crossing))


def winding_number(curve: BoundaryCurve, z: complex) -> int:
    rel = curve.points - z
    rolled = np.roll(rel, -1)
    angles = np.angle(rolled / rel)
    return int(np.rint(np.sum(angles) / (2.0 * np.pi)))


class Domain:
    """Bounded domain: one outer curve and zero or more hole curves.

    ``anchors[q]`` is a designated point inside hole ``q``; pole-type basis
    functions of the model layer are centered there.
    """

    def __init__(
        self,
        outer: BoundaryCurve,
        holes: Sequence[BoundaryCurve] = (),
        anchors: Sequence[complex] = (),
        validate: bool = True,
    ):
        self.outer = outer
        self.holes = list(holes)
        self.anchors = [complex(a) for a in anchors]
        if len(self.anchors) != len(self.holes):
            raise DomainError("need exactly one anchor per hole")
        if validate:
            self._validate()

    # -- structure ----------------------------------------------------------

    @property
    def curves(self) -> list[BoundaryCurve]:
        return [self.outer] + self.holes

    @property
    def centroid(self) -> complex:
        return self.outer.center_coefficient

    @property
    def diameter(self) -> float:
        return 2.0 * self.outer.radius_bound()

    @property
    def band(self) -> float:
        return BAND_FACTOR * self.diameter

    def _validate(self) -> None:
        if self.outer.signed_area() <= 0.0:
            raise DomainError("outer curve must be counterclockwise")
        for q, hole in enumerate(self.holes):
            if hole.signed_area() >= 0.0:
                raise DomainError(f"hole curve {q} must be clockwise")
            inside = [winding_number(self.outer, z) == 1 for z in hole.points[::8]]
            if not all(inside):
                raise DomainError(f"hole curve {q} is not inside the outer curve")
            if winding_number(hole, self.anchors[q]) != -1:
                raise DomainError(f"anchor {q} is not inside its hole")
        for q, hole in enumerate(self.holes):
            for p_idx in range(q + 1, len(self.holes)):
                other = self.holes[p_idx]
                if winding_number(hole, other.points[0]) != 0 or (
                    winding_number(other, hole.points[0]) != 0
                ):
                    raise DomainError(f"holes {q} and {p_idx} overlap")
        for curve in self.curves:
            d = cdist(
                np.column_stack([curve.points.real, curve.points.imag]),
                np.column_stack([curve.points.real, curve.points.imag]),
            )
            n = curve.nodes
            idx = np.arange(n)
            adjacent = np.minimum(np.abs(idx[:, None] - idx[None, :]), n - np.abs(idx[:, None] - idx[None, :])) <= 1
            d[adjacent] = np.inf
            if np.min(d) < 1e-6 * self.diameter:
                raise DomainError("curve self-intersects at sample resolution")
            if _segments_cross(_validation_polyline(curve)):
                raise DomainError("curve self-intersects (transversal crossing)")
        for q, first in enumerate(self.curves):
            for p_idx in range(q + 1, len(self.curves)):
                second = self.curves[p_idx]
                if _segments_cross(
                    _validation_polyline(first), _validation_polyline(second)
                ):
                    raise DomainError(f"boundary curves {q} and {p_idx} cross")

    # -- containment and distance -------------------------------------------

    def nearest_boundary(self, z: complex) -> tuple[int, float, complex, float]:
        """(curve index, parameter, boundary point, distance) nearest to ``z``."""
        best = None
        for idx, curve in enumerate(self.curves):
            dist, t = curve.distance_to(z)
            if best is None or dist < best[3]:
                best = (idx, t, complex(curve.point(t)), dist)
        return best

    def contains(self, z: complex, strict: bool = False) -> bool:
        idx, t, bpt, dist = self.nearest_boundary(z)
        if strict and dist <= self.band:
            return False
        near = dist <= 1e-3 * self.diameter
        inside = True
        for q, curve in enumerate(self.curves):
            if near and q == idx:
                g1 = complex(curve.derivative(t, 1))
                nu = -1j * g1 / abs(g1)
                side = ((z - bpt) * np.conj(nu)).real
                ok = side < 0.0  # outward normal positive means exterior
            else:
                w = winding_number(curve, z)
                ok = (w == 1) if q == 0 else (w == 0)
            inside = inside and ok
        return inside

    def on_boundary(self, z: complex, tol: float | None = None) -> bool:
        tol = self.band if tol is None else tol
        return self.nearest_boundary(z)[3] <= tol


def signed_distance(domain: Domain, z: complex) -> float:
    """Signed Euclidean distance to the boundary: negative inside the domain.

    This is the defining function ``psi`` used by the scaling construction;
    its gradient on the boundary is the outward unit normal.
    """
    dist = domain.nearest_boundary(z)[3]
    return -dist if domain.contains(complex(z)) else dist


def outward_normal(domain: Domain, p: complex) -> complex:
    """Outward unit normal at a boundary point ``p``.

    Raises ``DomainError`` if ``p`` does not lie on the boundary (within the
    containment band).
    """
    idx, t, bpt, dist = domain.nearest_boundary(p)
    if dist > max(domain.band, 1e-9 * domain.diameter):
        raise DomainError(f"{p} is not a boundary point (distance {dist:.3e})")
    g1 = complex(domain.curves[idx].derivative(t, 1))
    return -1j * g1 / abs(g1)


def inner_normal_sequence(domain: Domain, p: complex, steps: Sequence[float]) -> np.ndarray:
    """Points ``p - t_j * nu(p)`` along the inner normal at boundary point ``p``.

    Every step must land strictly inside the domain; otherwise the sequence is
    not usable as a family of scaling centers and a ``DomainError`` is raised.
    """
    nu = outward_normal(domain, p)
    pts = np.array([p - t * nu for t in steps], dtype=complex)
    for t, z in zip(steps, pts):
        if t <= 0.0:
            raise DomainError("normal steps must be positive")
        if not domain.contains(complex(z), strict=True):
            raise DomainError(f"step {t} leaves the domain at {z}")
    return pts


@dataclass
class DefiningFunctionPatch:
    """Local defining function at a boundary point.

    ``psi`` is negative inside, zero at ``point``; ``omega`` is the gradient
    ``psi_x + i psi_y`` at ``point``.  For the signed-distance realization the
    gradient is the outward unit normal.
    """

    point: complex
    psi: Callable[[complex], float]
    omega: complex

    @classmethod
    def from_domain(cls, domain: Domain, p: complex) -> "DefiningFunctionPatch":
        return cls(
            point=complex(p),
            psi=lambda z: signed_distance(domain, z),
            omega=outward_normal(domain, p),
        )


@dataclass(frozen=True)
class AffineScalingMap:
    """The rescaling ``T(z) = (z - center) / scale`` with ``scale > 0``."""

    center: complex
    scale: float

    def apply(self, z):
        return (np.asarray(z, dtype=complex) - self.center) / self.scale

    def invert(self, w):
        return np.asarray(w, dtype=complex) * self.scale + self.center


def scaling_map(domain: Domain, psi, p_n: complex) -> AffineScalingMap:
    """Build the scaling map centered at ``p_n`` with scale ``-psi(p_n)``.

    ``psi`` may be a ``DefiningFunctionPatch`` or a bare callable.  The center
    must be strictly inside (``psi(p_n) < 0``).
    """
    fn = psi.psi if isinstance(psi, DefiningFunctionPatch) else psi
    value = float(fn(p_n))
    if value >= 0.0:
        raise DomainError(f"scaling center {p_n} has psi={value:.3e}, need psi < 0")
    if not domain.contains(complex(p_n), strict=True):
        raise DomainError(f"scaling center {p_n} is not strictly interior")
    return AffineScalingMap(center=complex(p_n), scale=-value)


def scaled_domain(domain: Domain, mapping: AffineScalingMap) -> Domain:
    """Image domain under an affine scaling map, coefficient-exact."""

    def move(curve: BoundaryCurve) -> BoundaryCurve:
        coeffs = {}
        for k, c in zip(curve.wavenumbers, curve.coefficients):
            coeffs[int(k)] = complex(c) / mapping.scale
        coeffs[0] = coeffs.get(0, 0.0) - mapping.center / mapping.scale
        return BoundaryCurve(coeffs, nodes=curve.nodes)

    return Domain(
        outer=move(domain.outer),
        holes=[move(h) for h in domain.holes],
        anchors=[complex(mapping.apply(a)) for a in domain.anchors],
        validate=False,
    )


@dataclass(frozen=True)
class HalfPlane:
    """The limit half-plane ``{ z : Re(conj(omega) z) < 1 }``.

    Its defining function is ``psi_inf(z) = Re(conj(omega) z) - 1``, which is
    ``|omega|`` times the signed distance to the boundary line.
    """

    omega: complex

    def psi(self, z) -> float:
        return float((np.conj(self.omega) * z).real - 1.0)

    def contains(self, z) -> bool:
        return self.psi(z) < 0.0

    def distance(self, z):
        return (1.0 - (np.conj(self.omega) * np.asarray(z, dtype=complex)).real) / abs(
            self.omega
        )

    def boundary_samples(self, radius: float, count: int = 2048) -> np.ndarray:
        """Samples of the boundary line inside the closed ball ``|z| <= radius``."""
        foot = self.omega / abs(self.omega) ** 2
        if abs(foot) > radius:
            raise EmptyClipError("boundary line misses the clipping ball")
        half = np.sqrt(radius**2 - abs(foot) ** 2)
        s = np.linspace(-half, half, count)
        direction = 1j * self.omega / abs(self.omega)
        return foot + s * direction


def limit_halfplane(patch: DefiningFunctionPatch) -> HalfPlane:
    """Blow-up limit of the rescaled defining functions at ``patch.point``."""
    if patch.omega == 0:
        raise DomainError("defining-function gradient vanishes; no limit half-plane")
    return HalfPlane(omega=complex(patch.omega))


def hausdorff_distance_local(
    a_points: np.ndarray, b_points: np.ndarray, radius: float
) -> float:
    """Hausdorff distance between two point sets clipped to ``|z| <= radius``.

    Brute-force over the clipped sets (desk scale).  Raises ``EmptyClipError``
    when either clipped set is empty, since the clipped Hausdorff distance is
    undefined there.
    """
    a = np.asarray(a_points, dtype=complex).ravel()
    b = np.asarray(b_points, dtype=complex).ravel()
    a = a[np.abs(a) <= radius]
    b = b[np.abs(b) <= radius]
    if a.size == 0 or b.size == 0:
        raise EmptyClipError("clipped point set is empty")
    pa = np.column_stack([a.real, a.imag])
    pb = np.column_stack([b.real, b.imag])

    def directed(p, q):
        worst = 0.0
        for start in range(0, p.shape[0], 2048):
            block = cdist(p[start : start + 2048], q)
            worst = max(worst, float(np.max(np.min(block, axis=1))))
        return worst

    return max(directed(pa, pb), directed(pb, pa))


def curve_samples_in_ball(
    curve: BoundaryCurve, radius: float, target: int = 4000
) -> np.ndarray:
    """Dense samples of a curve restricted to ``|z| <= radius``.

    Uses a coarse pass to estimate the in-window parameter fraction and then a
    uniform fine grid, capped at 2^20 evaluations.  Returns the (possibly
    empty) array of in-window curve points.
    """
    coarse_n = 4096
    t = np.arange(coarse_n) * (2.0 * np.pi / coarse_n)
    pts = curve.point(t)
    frac = float(np.count_nonzero(np.abs(pts) <= 1.1 * radius)) / coarse_n
    if frac == 0.0:
        return pts[np.abs(pts) <= radius]
    fine_n = min(1 << 20, max(coarse_n, int(target / max(frac, 1e-6))))
    t = np.arange(fine_n) * (2.0 * np.pi / fine_n)
    pts = curve.point(t)
    return pts[np.abs(pts) <= radius]


def rotation_center(domain: Domain, tol: float = 1e-12) -> complex | None:
    """Common center if every boundary curve is a circle about one point.

    Such a domain is invariant under all rotations about the center, which
    the model layer exploits (the monomial/pole basis diagonalizes the Gram
    matrix exactly).  Anchors must coincide with the center as well.
    """
    data = [c.circle_data(tol=tol) for c in domain.curves]
    if any(d is None for d in data):
        return None
    center = data[0][0]
    scale = max(d[1] for d in data)
    for d in data:
        if abs(d[0] - center) > tol * scale:
            return None
    for a in domain.anchors:
        if abs(a - center) > tol * scale:
            return None
    return complex(center)
