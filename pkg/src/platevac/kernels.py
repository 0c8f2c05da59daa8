"""Closed-form time-integrated kernels for a single image at distance x.

Velocity kernels carry the double time integral of the electric-field
correlator of one image charge; position kernels carry the quadruple
integral. Both depend on x and t only through u = t / (2|x|), so each is
implemented as a scaled function of u:

    velocity_kernel(x, t) = F(u) / x**2      (dimension 1/length**2)
    position_kernel(x, t) = G(u)             (dimensionless)

with Lam(u) = artanh(min(u, 1/u)) = (1/2) ln|(1+u)/(1-u)| and

    F_par(u)  = u**2 / (8 (u**2 - 1)) - (u/8) Lam(u)
    F_norm(u) = (u/4) Lam(u)
    G_par(u)  = (1/6) (u**2 -   u**3 Lam(u) + ln|1 - u**2|)
    G_norm(u) = (1/6) (u**2 + 2 u**3 Lam(u) + ln|1 - u**2|)

All logarithms take the modulus of their argument, so every kernel is real
and finite on both sides of the light cone u = 1. The cone itself is a
genuine logarithmic/power singularity: public entry points reject points
with |t - 2|x|| < window * t.

The kernels are reduced: the universal charge/mass prefactor is applied
once, downstream, by :func:`platevac.physics.physicalize`.
"""

import math

import numpy as np

from .errors import GeometryError, SingularWindowError

# Default relative half-width of the excluded window around each light cone.
SINGULAR_WINDOW = 1e-6

# Branch switch points. Below _G_SERIES_CUT the closed position forms lose
# ~u**-2 digits to cancellation, so a power series takes over; above
# _U_LARGE the parallel forms cancel from the other side and an inverse
# power series takes over.
_G_SERIES_CUT = 0.35
_U_LARGE = 20.0

_G_SERIES_TERMS = 24
_INV_SERIES_TERMS = 16


def _lam(u):
    """artanh(min(u, 1/u)) elementwise; u is a nonnegative ndarray."""
    safe = np.maximum(u, np.finfo(float).tiny)
    arg = np.minimum(u, 1.0 / safe)
    with np.errstate(divide="ignore"):
        return np.arctanh(arg)


def _log_abs_one_minus_u2(u):
    # (1-u)(1+u) keeps precision near the cone, where 1-u**2 would not.
    return np.log(np.abs((1.0 - u) * (1.0 + u)))


def _vel_parallel_scaled(u):
    """F_par(u); ndarray in, ndarray out."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    big = u >= _U_LARGE

    us = u[~big]
    lam = _lam(us)
    with np.errstate(divide="ignore", invalid="ignore"):
        rational = us * us / (8.0 * (us * us - 1.0))
    out[~big] = rational - us * lam / 8.0

    # Large u: the two pieces cancel to O(u**-2); sum the difference series
    # F_par = sum_{k>=1} k / (4 (2k+1)) u**(-2k) instead.
    ub = u[big]
    w = 1.0 / (ub * ub)
    acc = np.zeros_like(ub)
    for k in range(_INV_SERIES_TERMS, 0, -1):
        acc = acc * w + k / (4.0 * (2.0 * k + 1.0))
    out[big] = acc * w
    return out


def _vel_normal_scaled(u):
    """F_norm(u); stable at all u, no branch needed."""
    u = np.asarray(u, dtype=float)
    return u * _lam(u) / 4.0


def _pos_parallel_scaled(u):
    """G_par(u); series below the cut, closed form between, inverse series above."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = u < _G_SERIES_CUT
    big = u >= _U_LARGE
    mid = ~(small | big)

    us = u[small]
    w = us * us
    # G_par = -(1/2) sum_{k>=0} (k+1) u**(2k+4) / ((2k+1)(k+2))
    acc = np.zeros_like(us)
    for k in range(_G_SERIES_TERMS - 1, -1, -1):
        acc = acc * w + (k + 1.0) / ((2.0 * k + 1.0) * (k + 2.0))
    out[small] = -0.5 * acc * w * w

    um = u[mid]
    out[mid] = (um * um - um**3 * _lam(um) + _log_abs_one_minus_u2(um)) / 6.0

    # Large u: u**2 - u**3 artanh(1/u) = -1/3 - sum_{k>=1} u**(-2k)/(2k+3)
    # and ln(u**2-1) = 2 ln u - sum_{k>=1} u**(-2k)/k.
    ub = u[big]
    w = 1.0 / (ub * ub)
    acc = np.zeros_like(ub)
    for k in range(_INV_SERIES_TERMS, 0, -1):
        acc = acc * w + 1.0 / (2.0 * k + 3.0) + 1.0 / k
    out[big] = (2.0 * np.log(ub) - 1.0 / 3.0 - acc * w) / 6.0
    return out


def _pos_normal_scaled(u):
    """G_norm(u); series below the cut, stable closed form everywhere else."""
    u = np.asarray(u, dtype=float)
    out = np.empty_like(u)
    small = u < _G_SERIES_CUT

    us = u[small]
    w = us * us
    # G_norm = (1/2) sum_{k>=0} u**(2k+4) / ((2k+1)(k+2))
    acc = np.zeros_like(us)
    for k in range(_G_SERIES_TERMS - 1, -1, -1):
        acc = acc * w + 1.0 / ((2.0 * k + 1.0) * (k + 2.0))
    out[small] = 0.5 * acc * w * w

    ub = u[~small]
    out[~small] = (ub * ub + 2.0 * ub**3 * _lam(ub) + _log_abs_one_minus_u2(ub)) / 6.0
    return out


def _check_x(x):
    if x == 0.0:
        raise GeometryError("image distance x must be nonzero")
    if not math.isfinite(x):
        raise GeometryError(f"image distance must be finite, got x={x}")


def _check_t(t):
    if t < 0.0 or not math.isfinite(t):
        raise GeometryError(f"elapsed time must be finite and nonnegative, got t={t}")


def _check_single_window(x, t, window):
    dist = abs(t - 2.0 * abs(x)) / t
    if dist < window:
        raise SingularWindowError(
            f"t={t} lies within {window} (relative) of the light cone at 2|x|={2 * abs(x)}"
        )


def velocity_kernel_parallel(x, t, *, window=SINGULAR_WINDOW):
    """Reduced velocity-dispersion kernel for motion along the plates.

    Parameters
    ----------
    x : float
        Signed distance to the image charge; only |x| enters.
    t : float
        Elapsed time. ``t = 0`` returns exactly 0.
    window : float, optional
        Relative half-width of the rejected region around t = 2|x|.

    Returns
    -------
    float
        F_par(t / 2|x|) / x**2.

    Raises
    ------
    GeometryError
        If ``x == 0`` or inputs are not finite.
    SingularWindowError
        If ``t`` is within ``window * t`` of the light cone.
    """
    _check_x(x)
    _check_t(t)
    if t == 0.0:
        return 0.0
    _check_single_window(x, t, window)
    u = t / (2.0 * abs(x))
    return float(_vel_parallel_scaled(np.float64(u))) / (x * x)


def velocity_kernel_normal(x, t, *, window=SINGULAR_WINDOW):
    """Reduced velocity-dispersion kernel for motion along the plate normal.

    Same contract as :func:`velocity_kernel_parallel`; returns
    F_norm(t / 2|x|) / x**2, which is strictly positive for t > 0.
    """
    _check_x(x)
    _check_t(t)
    if t == 0.0:
        return 0.0
    _check_single_window(x, t, window)
    u = t / (2.0 * abs(x))
    return float(_vel_normal_scaled(np.float64(u))) / (x * x)


def position_kernel_parallel(x, t, *, window=SINGULAR_WINDOW):
    """Reduced position-dispersion kernel for motion along the plates.

    Same contract as :func:`velocity_kernel_parallel`; returns the
    dimensionless G_par(t / 2|x|).
    """
    _check_x(x)
    _check_t(t)
    if t == 0.0:
        return 0.0
    _check_single_window(x, t, window)
    u = t / (2.0 * abs(x))
    return float(_pos_parallel_scaled(np.float64(u)))


def position_kernel_normal(x, t, *, window=SINGULAR_WINDOW):
    """Reduced position-dispersion kernel for motion along the plate normal.

    Same contract as :func:`velocity_kernel_parallel`; returns the
    dimensionless G_norm(t / 2|x|).
    """
    _check_x(x)
    _check_t(t)
    if t == 0.0:
        return 0.0
    _check_single_window(x, t, window)
    u = t / (2.0 * abs(x))
    return float(_pos_normal_scaled(np.float64(u)))


class SingularityReport:
    """Distance from an evaluation time to the nearest image light cone.

    Attributes
    ----------
    distance : float
        min |t - 2 X| / t over all image offsets X; inf when t = 0.
    nearest_offset : float or None
        The offset X achieving the minimum.
    nearest_time : float or None
        The singular time 2 X for that offset.
    family : str or None
        "plain" for offsets n a, "shifted" for n a +/- z.
    n : int or None
        Image index of the nearest offset.
    threshold : float
        The window the distance was compared against.
    is_near : bool
        True when ``distance < threshold``.
    """

    __slots__ = (
        "distance",
        "nearest_offset",
        "nearest_time",
        "family",
        "n",
        "threshold",
        "is_near",
    )

    def __init__(self, distance, nearest_offset, nearest_time, family, n, threshold):
        self.distance = distance
        self.nearest_offset = nearest_offset
        self.nearest_time = nearest_time
        self.family = family
        self.n = n
        self.threshold = threshold
        self.is_near = distance < threshold

    def __repr__(self):
        return (
            f"SingularityReport(distance={self.distance:.3e}, "
            f"offset={self.nearest_offset}, family={self.family!r}, n={self.n}, "
            f"near={self.is_near})"
        )


def singularity_report(z, a, t, n_max=None, threshold=SINGULAR_WINDOW):
    """Locate the image light cone nearest to time ``t``.

    The image offsets of the two-plate geometry are n a (n >= 1) and
    |n a +/- z| (n >= 0); each contributes a singular time 2 X. The
    report carries the minimum relative distance |t - 2 X| / t.

    Parameters
    ----------
    z, a : float
        Particle position and plate separation, 0 < z < a.
    t : float
        Elapsed time.
    n_max : int, optional
        Highest image index scanned. Default covers every cone up to and
        one beyond the horizon t / 2.
    threshold : float, optional
        Window used to set the report's ``is_near`` flag.
    """
    if not (0.0 < z < a):
        raise GeometryError(f"need 0 < z < a, got z={z}, a={a}")
    _check_t(t)
    if t == 0.0:
        return SingularityReport(math.inf, None, None, None, None, threshold)
    if n_max is None:
        n_max = int(math.ceil((0.5 * t + z) / a)) + 1

    n = np.arange(0, n_max + 1, dtype=float)
    offsets = np.concatenate([n[1:] * a, n * a + z, np.abs(n[1:] * a - z)])
    families = ["plain"] * (n_max) + ["shifted"] * (n_max + 1) + ["shifted"] * (n_max)
    indices = np.concatenate([n[1:], n, n[1:]]).astype(int)

    dist = np.abs(t - 2.0 * offsets) / t
    k = int(np.argmin(dist))
    return SingularityReport(
        float(dist[k]),
        float(offsets[k]),
        float(2.0 * offsets[k]),
        families[k],
        int(indices[k]),
        threshold,
    )
