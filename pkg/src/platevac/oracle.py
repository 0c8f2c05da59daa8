"""Independent quadrature route to the dispersions.

The closed-form kernels in :mod:`platevac.kernels` are time integrals of
two raw rational integrands. This module recomputes those integrals by
adaptive quadrature, without touching the closed forms, so the two routes
certify each other:

    velocity(x, t) = 2 * integral_0^t (t - tau) K(x, tau) dtau
    position(x, t) = 2 * integral_0^t (t**3/3 - tau t**2/2 + tau**3/6)
                     K(x, tau) dtau

with K the raw parallel or normal integrand. Past the image light cone
(t > 2x) the integrand has a pole of order 2 or 3 at tau0 = 2x inside the
domain; the integral is then a Hadamard finite part. It is evaluated by
splitting off the exact Laurent part of K at tau0 inside a symmetric
window of half-width pv_excision * tau0: the Laurent part times the
polynomial weight integrates in closed form (endpoint antiderivatives,
divergent boundary terms dropped; the 1/(tau - tau0) piece is a principal
value), while everything else stays numeric. The result is independent of
the window width, which the certification report checks by halving it.
"""

import hashlib
import json
import math
import warnings
from dataclasses import asdict, dataclass

import scipy.integrate

from .correlators import DEFAULT_CONTROL, _grouped_image_sum
from .errors import ConvergenceError, GeometryError, SingularWindowError
from .kernels import (
    SINGULAR_WINDOW,
    position_kernel_normal,
    position_kernel_parallel,
    singularity_report,
    velocity_kernel_normal,
    velocity_kernel_parallel,
)
from .quantities import DispersionKind, EvalPoint, Geometry, ReducedValue


@dataclass(frozen=True)
class QuadratureSpec:
    """Adaptive quadrature policy for the oracle.

    Attributes
    ----------
    abs_tol, rel_tol : float
        Tolerances handed to the adaptive integrator.
    max_subdivisions : int
        Subdivision cap per panel.
    pv_excision : float
        Relative half-width of the window around an interior pole inside
        which the Laurent part is integrated in closed form. Results must
        not depend on it; see :func:`certification_report`.
    """

    abs_tol: float = 1e-13
    rel_tol: float = 1e-11
    max_subdivisions: int = 200
    pv_excision: float = 1e-3

    def __post_init__(self):
        if self.abs_tol <= 0.0 or self.rel_tol <= 0.0:
            raise GeometryError("quadrature tolerances must be positive")
        if self.max_subdivisions < 10:
            raise GeometryError("max_subdivisions must be at least 10")
        if not (0.0 < self.pv_excision < 0.4):
            raise GeometryError("pv_excision must lie in (0, 0.4)")


DEFAULT_QUADRATURE = QuadratureSpec()

# Pinned image counts giving quadrature-route truncation below 1e-8
# relative at the certification point: the parallel families cancel
# pairwise (offset**-6 group decay), the normal families do not
# (offset**-4, so the truncated tail shrinks only like the count cubed).
N_IMAGES_PARALLEL = 50
N_IMAGES_NORMAL = 300


def _raw_kernel(axis, x):
    """Raw correlator integrand for one image at distance x, as K(tau)."""
    x2 = 4.0 * x * x

    if axis == "parallel":

        def k(tau):
            d = tau * tau - x2
            return (tau * tau + x2) / (d * d * d)

    else:

        def k(tau):
            d = tau * tau - x2
            return 1.0 / (d * d)

    return k


def _laurent(axis, tau0):
    """Laurent coefficients of the raw integrand at its poles +-tau0.

    Returns (a, b): a[k-1] multiplies (tau - tau0)**-k, b[k-1] multiplies
    (tau + tau0)**-k, with b_k = (-1)**k a_k by evenness.
    """
    if axis == "parallel":
        a = (1.0 / (8.0 * tau0**3), -1.0 / (8.0 * tau0**2), 1.0 / (4.0 * tau0))
    else:
        a = (-1.0 / (4.0 * tau0**3), 1.0 / (4.0 * tau0**2))
    b = tuple((-1.0) ** k * a[k - 1] for k in range(1, len(a) + 1))
    return a, b


def _weight(observable, t):
    """Weight polynomial w(tau) and its Taylor coefficients at a point."""
    if observable == "velocity":

        def w(tau):
            return 2.0 * (t - tau)

        def taylor(tau0):
            return (2.0 * (t - tau0), -2.0)

    else:

        def w(tau):
            return 2.0 * t**3 / 3.0 - tau * t * t + tau**3 / 3.0

        def taylor(tau0):
            return (
                2.0 * t**3 / 3.0 - tau0 * t * t + tau0**3 / 3.0,
                tau0 * tau0 - t * t,
                tau0,
                1.0 / 3.0,
            )

    return w, taylor


def _quad(f, lo, hi, spec):
    if hi <= lo:
        return 0.0, 0.0
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.integrate.IntegrationWarning)
        val, err = scipy.integrate.quad(
            f, lo, hi, epsabs=spec.abs_tol, epsrel=spec.rel_tol, limit=spec.max_subdivisions
        )
    if err > 100.0 * (spec.abs_tol + spec.rel_tol * abs(val)):
        raise ConvergenceError(
            f"quadrature error {err:.2e} on [{lo}, {hi}] exceeds tolerance",
            value=val,
            error_estimate=err,
        )
    return val, err


def _fp_power(p, t, tau0):
    """Finite part of integral_0^t (tau - tau0)**p dtau, pole inside (0, t).

    Endpoint antiderivative differences; the divergent boundary terms at
    tau0 cancel (odd p) or are dropped (even p) by the Hadamard
    prescription, and p = -1 is the principal-value logarithm.
    """
    if p == -1:
        return math.log((t - tau0) / tau0)
    return ((t - tau0) ** (p + 1) - (-tau0) ** (p + 1)) / (p + 1)


def _finite_part_image(axis, observable, x, t, spec):
    """Weighted integral of one image's raw integrand when t > 2x.

    The integrand splits exactly into its Laurent part S at the interior
    pole tau0 plus the mirror-pole remainder R, which is smooth on the
    whole domain. R integrates numerically (split at tau0 +- the excision
    width, which therefore only partitions panels and cannot move the
    result); w * S integrates in closed form since the weight is a
    polynomial, giving the Hadamard finite part with no cancellation.
    """
    tau0 = 2.0 * abs(x)
    w, taylor = _weight(observable, t)
    h = spec.pv_excision * tau0
    h = min(h, 0.45 * tau0, 0.45 * (t - tau0))

    a, b = _laurent(axis, tau0)

    def regular(tau):
        return w(tau) * sum(bk / (tau + tau0) ** k for k, bk in enumerate(b, start=1))

    val_lo, err_lo = _quad(regular, 0.0, tau0 - h, spec)
    val_mid, err_mid = _quad(regular, tau0 - h, tau0 + h, spec)
    val_hi, err_hi = _quad(regular, tau0 + h, t, spec)

    wj = taylor(tau0)
    val_fp = 0.0
    for k, ak in enumerate(a, start=1):
        for j, wcoef in enumerate(wj):
            val_fp += ak * wcoef * _fp_power(j - k, t, tau0)

    return val_lo + val_mid + val_hi + val_fp, err_lo + err_mid + err_hi


def _image_integral(axis, observable, x, t, spec, *, window=SINGULAR_WINDOW):
    tau0 = 2.0 * abs(x)
    if x == 0.0:
        raise GeometryError("image distance x must be nonzero")
    if t == 0.0:
        return 0.0
    if abs(t - tau0) / t < window:
        raise SingularWindowError(f"t={t} on the image cone at 2|x|={tau0}")
    w, _ = _weight(observable, t)
    kraw = _raw_kernel(axis, abs(x))
    if t < tau0:
        val, _ = _quad(lambda tau: w(tau) * kraw(tau), 0.0, t, spec)
        return val
    val, _ = _finite_part_image(axis, observable, x, t, spec)
    return val


def velocity_integral(kernel, t, spec=None):
    """2 * integral_0^t (t - tau) kernel(tau) dtau by adaptive quadrature.

    For black-box integrands that are regular on [0, t]. Image integrands
    with an interior light-cone pole go through
    :func:`image_velocity_integral` instead.
    """
    spec = spec or DEFAULT_QUADRATURE
    val, _ = _quad(lambda tau: 2.0 * (t - tau) * kernel(tau), 0.0, t, spec)
    return val


def position_integral(kernel, t, spec=None):
    """2 * integral_0^t (t**3/3 - tau t**2/2 + tau**3/6) kernel(tau) dtau.

    Same contract as :func:`velocity_integral`. With kernel = 1 the
    result is exactly t**4 / 4, a useful smoke test for the weight.
    """
    spec = spec or DEFAULT_QUADRATURE
    w, _ = _weight("position", t)
    val, _ = _quad(lambda tau: w(tau) * kernel(tau), 0.0, t, spec)
    return val


def image_velocity_integral(axis, x, t, spec=None, *, window=SINGULAR_WINDOW):
    """Quadrature route to the closed-form velocity kernel of one image."""
    if axis not in ("parallel", "normal"):
        raise GeometryError(f"axis must be parallel or normal, got {axis!r}")
    return _image_integral(axis, "velocity", x, t, spec or DEFAULT_QUADRATURE, window=window)


def image_position_integral(axis, x, t, spec=None, *, window=SINGULAR_WINDOW):
    """Quadrature route to the closed-form position kernel of one image."""
    if axis not in ("parallel", "normal"):
        raise GeometryError(f"axis must be parallel or normal, got {axis!r}")
    return _image_integral(axis, "position", x, t, spec or DEFAULT_QUADRATURE, window=window)


def dispersion_via_quadrature(kind, point, n_images=None, spec=None, *, window=SINGULAR_WINDOW):
    """Reduced dispersion summed from per-image quadratures.

    Independent of the closed-form kernels: every image contributes its
    raw-integrand quadrature. The image count is fixed (defaults pinned
    per axis); the returned tail estimate bounds what the truncation
    leaves out, by integral comparison of the offset**-4 group decay.
    """
    kind = DispersionKind.coerce(kind)
    if not isinstance(point, EvalPoint):
        raise GeometryError(f"expected EvalPoint, got {type(point).__name__}")
    spec = spec or DEFAULT_QUADRATURE
    geom, t = point.geometry, point.t
    a, z = geom.a, geom.z
    if t == 0.0:
        return ReducedValue(0.0)
    report = singularity_report(z, a, t, threshold=window)
    if report.is_near:
        raise SingularWindowError(
            f"t={t} within {window} (relative) of image cone at t={report.nearest_time}",
            report=report,
        )
    if n_images is None:
        n_images = N_IMAGES_PARALLEL if kind.axis == "parallel" else N_IMAGES_NORMAL
    horizon = int(math.ceil((0.5 * t + z) / a)) + 1
    if n_images < horizon:
        raise GeometryError(
            f"n_images={n_images} does not reach past the horizon (need >= {horizon})"
        )

    sign = kind.image_sign
    axis, obs = kind.axis, kind.observable
    total = sign * _image_integral(axis, obs, z, t, spec, window=window)
    last_group = 0.0
    for n in range(1, n_images + 1):
        plain = _image_integral(axis, obs, n * a, t, spec, window=window)
        up = _image_integral(axis, obs, n * a + z, t, spec, window=window)
        down = _image_integral(axis, obs, n * a - z, t, spec, window=window)
        total += 2.0 * plain + sign * (up + down)
        last_group = 2.0 * abs(plain) + abs(up) + abs(down)
    tail = last_group * n_images / 3.0
    return ReducedValue(total, tail, n_images, report)


# Closed-form kernels the certification grid compares against.
_CLOSED = {
    ("parallel", "velocity"): velocity_kernel_parallel,
    ("normal", "velocity"): velocity_kernel_normal,
    ("parallel", "position"): position_kernel_parallel,
    ("normal", "position"): position_kernel_normal,
}

_GRID_X = (0.5, 1.0, 2.0)
_GRID_T_OVER_X = (0.1, 0.5, 1.5, 3.0)
_GRID_TOL = 1e-8


def certification_report(spec=None):
    """Cross-check closed-form kernels against the quadrature route.

    Runs the full x and t/|x| grid for all four kernels (the t/|x| = 3
    column exercises the finite-part machinery), then records the
    convention adjudications the two routes settle: the modulus-log
    position forms past the cone, the sign with which the shifted image
    family enters the normal components, and the independence of the
    finite part from the excision window.

    Returns a JSON-serializable dict with a top-level "certified" flag.
    """
    spec = spec or DEFAULT_QUADRATURE
    half = QuadratureSpec(
        abs_tol=spec.abs_tol,
        rel_tol=spec.rel_tol,
        max_subdivisions=spec.max_subdivisions,
        pv_excision=spec.pv_excision / 2.0,
    )
    grid = []
    worst = 0.0
    for (axis, obs), closed in _CLOSED.items():
        for x in _GRID_X:
            for ratio in _GRID_T_OVER_X:
                t = ratio * x
                quad_val = _image_integral(axis, obs, x, t, spec)
                closed_val = closed(x, t)
                diff = abs(quad_val - closed_val)
                worst = max(worst, diff)
                grid.append(
                    {
                        "axis": axis,
                        "observable": obs,
                        "x": x,
                        "t": t,
                        "closed": closed_val,
                        "quadrature": quad_val,
                        "abs_diff": diff,
                        "finite_part": ratio > 2.0,
                        "ok": diff <= _GRID_TOL,
                    }
                )

    # Excision-window independence at the finite-part grid corner.
    fp_checks = []
    for axis, obs in _CLOSED:
        full_val = _image_integral(axis, obs, 1.0, 3.0, spec)
        half_val = _image_integral(axis, obs, 1.0, 3.0, half)
        fp_checks.append(
            {
                "axis": axis,
                "observable": obs,
                "value": full_val,
                "halved_window": half_val,
                "abs_diff": abs(full_val - half_val),
                "ok": abs(full_val - half_val) <= 1e-9,
            }
        )

    # Sign adjudication for the shifted family in the normal components:
    # compare the quadrature image sum against both candidate signs of
    # the closed-form route at a pre-cone point.
    from .dispersions import dispersion_exact  # deferred: dispersions imports nothing back

    point = EvalPoint(Geometry(1.0, 0.5), 0.3)
    sign_checks = []
    for obs in ("velocity", "position"):
        kind = DispersionKind("normal", obs)
        quad_val = dispersion_via_quadrature(kind, point, spec=spec).value
        plus = dispersion_exact(kind, point).value
        minus = _flipped_normal_sum(kind, point)
        sign_checks.append(
            {
                "observable": obs,
                "quadrature": quad_val,
                "closed_plus": plus,
                "closed_minus": minus,
                "plus_diff": abs(quad_val - plus),
                "minus_diff": abs(quad_val - minus),
                "ok": abs(quad_val - plus) < 1e-7 < abs(quad_val - minus),
            }
        )

    certified = (
        all(g["ok"] for g in grid)
        and all(c["ok"] for c in fp_checks)
        and all(s["ok"] for s in sign_checks)
    )
    return {
        "quadrature_spec": asdict(spec),
        "grid_tolerance": _GRID_TOL,
        "worst_grid_diff": worst,
        "grid": grid,
        "conventions": {
            "log_modulus": {
                "statement": "position kernels take log modulus past the cone",
                "evidence": "finite-part grid rows at t/|x| = 3 agree with closed forms",
                "ok": all(g["ok"] for g in grid if g["finite_part"]),
            },
            "normal_shifted_sign": {
                "statement": "shifted image family enters normal components with +",
                "checks": sign_checks,
                "ok": all(s["ok"] for s in sign_checks),
            },
            "finite_part_window": {
                "statement": "finite part independent of pv_excision",
                "checks": fp_checks,
                "ok": all(c["ok"] for c in fp_checks),
            },
        },
        "certified": certified,
    }


def _flipped_normal_sum(kind, point):
    """Closed-form image sum with the (wrong) minus shifted-family sign."""
    from .dispersions import _offset_kernel

    geom, t = point.geometry, point.t
    horizon = int(math.ceil((0.5 * t + geom.z) / geom.a)) + 1
    value, _, _ = _grouped_image_sum(
        _offset_kernel(kind, t), -1.0, geom.a, geom.z, DEFAULT_CONTROL, horizon
    )
    return value


def write_adjudication(path, spec=None):
    """Write the certification report as JSON; returns (path, sha256).

    The digest covers the file bytes exactly, so rehashing the file
    later reproduces it.
    """
    report = certification_report(spec)
    data = (json.dumps(report, indent=2, sort_keys=True) + "\n").encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)
    return path, hashlib.sha256(data).hexdigest()
