"""Shared exception types."""


class DomainError(ValueError):
    """Invalid geometry: bad curve, point outside its required region, etc."""


class EmptyClipError(ValueError):
    """A clipped point set is empty, so the local Hausdorff distance is undefined."""


class ConfigError(ValueError):
    """An experiment or domain configuration is malformed or inconsistent."""


class QuadratureError(RuntimeError):
    """A boundary quadrature failed its convergence check under node doubling."""


class CurvatureError(RuntimeError):
    """A curvature evaluation produced a result outside its validity guards."""
