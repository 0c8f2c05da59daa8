"""Exact reduced dispersions of a charged particle between two plates.

Each dispersion is an image sum of one closed-form kernel over the offset
families n a (entering twice for n >= 1) and n a +/- z (entering with the
axis sign): minus for motion along the plates, plus for motion along the
normal. The n = 0 member of the shifted family is the single-plate term.

Values are reduced: multiply by the universal charge/mass prefactor via
:func:`platevac.physics.physicalize` to get physical dispersions.
"""

import math

import numpy as np

from .correlators import DEFAULT_CONTROL, _grouped_image_sum
from .errors import GeometryError, SingularWindowError
from .kernels import (
    SINGULAR_WINDOW,
    _pos_normal_scaled,
    _pos_parallel_scaled,
    _vel_normal_scaled,
    _vel_parallel_scaled,
    singularity_report,
)
from .quantities import DispersionKind, EvalPoint, ReducedValue

# (scaled kernel of u, carries 1/x**2) per (axis, observable).
_SCALED = {
    ("parallel", "velocity"): (_vel_parallel_scaled, True),
    ("normal", "velocity"): (_vel_normal_scaled, True),
    ("parallel", "position"): (_pos_parallel_scaled, False),
    ("normal", "position"): (_pos_normal_scaled, False),
}


def _offset_kernel(kind, t):
    """Vectorized per-image value as a function of the offset array."""
    scaled, per_x2 = _SCALED[(kind.axis, kind.observable)]

    def fvec(x):
        u = t / (2.0 * x)
        v = scaled(u)
        return v / (x * x) if per_x2 else v

    return fvec


def dispersion_exact(kind, point, ctrl=None, *, window=SINGULAR_WINDOW):
    """Exact reduced dispersion by direct image summation.

    Parameters
    ----------
    kind : DispersionKind
        Axis and observable to compute.
    point : EvalPoint
        Geometry and elapsed time.
    ctrl : SeriesControl, optional
        Truncation policy; the default targets 1e-10 relative tails.
    window : float, optional
        Relative singular-window half-width passed to the cone scan.

    Returns
    -------
    ReducedValue
        Reduced dispersion with tail estimate, image count and the
        singularity report for the point.

    Raises
    ------
    SingularWindowError
        If ``t`` is within ``window`` (relative) of any image cone.
    ConvergenceError
        If the sum does not meet ``ctrl.rel_tol`` by ``ctrl.n_max``.
    """
    kind = DispersionKind.coerce(kind)
    if not isinstance(point, EvalPoint):
        raise GeometryError(f"expected EvalPoint, got {type(point).__name__}")
    geom, t = point.geometry, point.t
    if t == 0.0:
        return ReducedValue(0.0)
    report = singularity_report(geom.z, geom.a, t, threshold=window)
    if report.is_near:
        raise SingularWindowError(
            f"t={t} within {window} (relative) of image cone at t={report.nearest_time}",
            report=report,
        )
    # Terms decay like offset**-4 only beyond the horizon t/2; never stop
    # the sum before every offset family has crossed it.
    horizon = int(math.ceil((0.5 * t + geom.z) / geom.a)) + 1
    value, tail, n_used = _grouped_image_sum(
        _offset_kernel(kind, t),
        kind.image_sign,
        geom.a,
        geom.z,
        ctrl or DEFAULT_CONTROL,
        horizon,
    )
    return ReducedValue(value, tail, n_used, report)


def single_plate_reference(kind, z, t, *, window=SINGULAR_WINDOW):
    """Reduced dispersion near a single plate at distance z.

    This is the n = 0 shifted-image term alone: the a -> infinity limit
    of :func:`dispersion_exact` at fixed z.
    """
    kind = DispersionKind.coerce(kind)
    if not (z > 0.0):
        raise GeometryError(f"plate distance must be positive, got z={z}")
    if t < 0.0:
        raise GeometryError(f"elapsed time must be nonnegative, got t={t}")
    if t == 0.0:
        return 0.0
    dist = abs(t - 2.0 * z) / t
    if dist < window:
        raise SingularWindowError(f"t={t} on the single-plate cone at 2z={2 * z}")
    fvec = _offset_kernel(kind, t)
    return kind.image_sign * float(fvec(np.array([z]))[0])
