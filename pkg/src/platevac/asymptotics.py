"""Asymptotic expansions of the reduced dispersions.

Two regimes have closed expansions:

* large separation (times short compared with the nearest image round
  trip): the two nearest images keep their exact kernels and every
  distant image is replaced by its leading power law, which resums into
  trigonometric lattice constants;
* late times (many cavity crossings): logarithmic/power laws obtained by
  replacing image sums with integrals, plus the w/h bookkeeping used to
  organize that replacement for the parallel velocity.

Every function returns the same reduced normalization as
:func:`platevac.dispersions.dispersion_exact`. A point outside a
formula's regime raises :class:`platevac.errors.RegimeError`.
"""

import math

import numpy as np

from .errors import ConvergenceError, GeometryError, RegimeError
from .kernels import (
    position_kernel_normal,
    position_kernel_parallel,
    velocity_kernel_normal,
    velocity_kernel_parallel,
    _vel_parallel_scaled,
)
from .quantities import DispersionKind, EvalPoint, ReducedValue

# Default regime margins: large-a wants t at most 1/margin of the nearest
# image round trip, large-t wants at least margin cavity crossings.
REGIME_MARGIN = 5.0


def _as_kind(kind):
    return DispersionKind.coerce(kind)


def image_sum_quartic(z, a):
    """Closed form of sum over all integers n of 1 / (n a + z)**4.

    Equals pi**4 (2 + cos(2 pi z / a)) / (3 a**4 sin(pi z / a)**4).
    """
    if not (0.0 < z < a):
        raise GeometryError(f"need 0 < z < a, got z={z}, a={a}")
    s = math.sin(math.pi * z / a)
    c = math.cos(2.0 * math.pi * z / a)
    return math.pi**4 * (2.0 + c) / (3.0 * a**4 * s**4)


def approx_large_a(kind, point, *, margin=REGIME_MARGIN):
    """Wide-gap expansion: exact nearest images plus lattice power laws.

    Valid while t is small compared with the round trips 2z and
    2(a - z); enforced as t <= min(2z, 2(a-z)) / margin.
    """
    kind = _as_kind(kind)
    geom, t = point.geometry, point.t
    a, z, zbar = geom.a, geom.z, geom.zbar
    if t > min(2.0 * z, 2.0 * zbar) / margin:
        raise RegimeError(
            f"large-separation form needs t <= min(2z, 2(a-z))/{margin}, got t={t}"
        )
    lattice = image_sum_quartic(z, a) - z**-4 - zbar**-4
    zeta4_sum = 2.0 * math.pi**4 / 90.0  # sum over n != 0 of n**-4

    if kind.observable == "velocity":
        coeff = t * t / 16.0
        kern = velocity_kernel_parallel if kind.axis == "parallel" else velocity_kernel_normal
    else:
        coeff = t**4 / 64.0
        kern = position_kernel_parallel if kind.axis == "parallel" else position_kernel_normal

    near = kind.image_sign * (kern(z, t) + kern(zbar, t))
    # Distant shifted images contribute +coeff * lattice for both axes:
    # the axis sign and the kernel's leading sign cancel. Distant plain
    # images keep the kernel's own sign.
    plain = kind.image_sign * coeff * zeta4_sum / a**4
    return ReducedValue(near + coeff * lattice + plain)


def approx_large_a_far(kind, point, *, margin=REGIME_MARGIN):
    """Single-plate-dominated limit z << t << a (velocity: z, t << a).

    Keeps the nearest plate's contribution and the leading correction in
    t/a. Position components also replace the nearest-plate kernel by its
    own late-time law, so they additionally require t >= 2z * margin.
    """
    kind = _as_kind(kind)
    geom, t = point.geometry, point.t
    a, z = geom.a, geom.z
    if a < 20.0 * margin * z:
        raise RegimeError(f"far-plate form needs a >> z, got a/z={a / z}")
    if t > 2.0 * a / margin:
        raise RegimeError(f"far-plate form needs t << 2a, got t={t}, a={a}")
    ta4 = (t / a) ** 4

    if kind.observable == "velocity":
        if kind.axis == "parallel":
            value = -velocity_kernel_parallel(z, t) + 0.125 * ta4 * (z / a) ** 8 / (t * t)
        else:
            value = velocity_kernel_normal(z, t) + math.pi**4 * t * t / (360.0 * a**4)
        return ReducedValue(value)

    if t < 2.0 * z * margin:
        raise RegimeError(f"far-plate position form needs t >> 2z, got t={t}, z={z}")
    if kind.axis == "parallel":
        value = -math.log(t / (2.0 * z)) / 3.0 + ta4 * (z / a) ** 8 / 32.0
    else:
        value = (
            t * t / (8.0 * z * z)
            + math.log(t / (2.0 * z)) / 3.0
            + math.pi**4 * ta4 / 1440.0
        )
    return ReducedValue(value)


def approx_large_t(kind, point, *, margin=REGIME_MARGIN):
    """Late-time laws after many cavity crossings, t >= margin * 2a."""
    kind = _as_kind(kind)
    geom, t = point.geometry, point.t
    a, z, zbar = geom.a, geom.z, geom.zbar
    if point.gamma < margin:
        raise RegimeError(
            f"late-time form needs t/(2a) >= {margin}, got {point.gamma}"
        )
    if kind.observable == "velocity":
        if kind.axis == "parallel":
            value = -1.0 / (3.0 * t * t) + (32.0 * a * a - 24.0 * z * zbar) / (15.0 * t**4)
        else:
            value = (
                (a * a - 2.0 * z * zbar) / (4.0 * z * z * zbar * zbar)
                + 1.0 / (2.0 * a * a)
                + 3.0 / (4.0 * (a + z) * (2.0 * a - z))
                - 1.0 / (t * t)
            )
        return ReducedValue(value)

    if kind.axis == "parallel":
        value = (
            -math.log(t / (2.0 * z)) / 3.0
            - math.log(t / (2.0 * zbar)) / 3.0
            - 2.0 * math.log(t / (2.0 * a)) / 3.0
            + (a + z) / (3.0 * a) * math.log(t / (2.0 * (a + z)))
            + (2.0 * a - z) / (3.0 * a) * math.log(t / (2.0 * (2.0 * a - z)))
        )
    else:
        value = (
            t * t * (a * a - 2.0 * z * zbar) / (8.0 * z * z * zbar * zbar)
            + t * t / (4.0 * a * a)
            + 3.0 * t * t / (8.0 * (a + z) * (2.0 * a - z))
            + math.log(t * t / (4.0 * z * zbar)) / 3.0
            - 2.0 * math.log(t / (2.0 * a)) / 3.0
            - (a + z) / (3.0 * a) * math.log(t / (2.0 * (a + z)))
            - (2.0 * a - z) / (3.0 * a) * math.log(t / (2.0 * (2.0 * a - z)))
        )
    return ReducedValue(value)


def midpoint_extremal(kind, a, t, *, margin=REGIME_MARGIN):
    """Late-time laws specialized to the midplane z = a/2."""
    kind = _as_kind(kind)
    if a <= 0.0:
        raise GeometryError(f"plate separation must be positive, got a={a}")
    if t < 2.0 * a * margin:
        raise RegimeError(f"midplane late-time form needs t >= {margin} * 2a, got t={t}")
    if kind.observable == "velocity":
        if kind.axis == "parallel":
            value = -1.0 / (3.0 * t * t) + 26.0 * a * a / (15.0 * t**4)
        else:
            value = 17.0 / (6.0 * a * a) - 1.0 / (t * t)
    else:
        if kind.axis == "parallel":
            value = -2.0 / 3.0 * math.log(t * t / (2.0 * a * a)) + math.log(t / (3.0 * a))
        else:
            value = (
                17.0 * t * t / (12.0 * a * a)
                + 2.0 / 3.0 * math.log(2.0)
                - math.log(t / (3.0 * a))
            )
    return ReducedValue(value)


def w_function(u):
    """Tail profile w(u) of the image-to-integral replacement.

    Principal-value combination of the two integrals from u to infinity
    of 1/(x**2 (1 - x**2)) and ln|(1+x)/(1-x)| / (2 x**3); in closed form

        w(u) = 1/(2u) - (1 + u**2) artanh*(u) / (2 u**2)

    with artanh*(u) = artanh(min(u, 1/u)). Odd expansion
    -(2/3)u - (4/15)u**3 - ... near zero.
    """
    if u < 0.0 or not math.isfinite(u):
        raise GeometryError(f"w requires finite u >= 0, got u={u}")
    if u == 0.0:
        return 0.0
    if u == 1.0:
        raise GeometryError("w diverges logarithmically at u = 1")
    if u < 1e-3:
        u2 = u * u
        return -u * (2.0 / 3.0 + u2 * (4.0 / 15.0 + u2 * (6.0 / 35.0)))
    lam = math.atanh(min(u, 1.0 / u))
    return 0.5 / u - (1.0 + u * u) * lam / (2.0 * u * u)


def h_function(z, a, t, *, rel_tol=1e-10, n_max=2_000_000):
    """Residual image sum left after peeling off both single-plate terms.

    h = sum_{n>=1} [2 f_par(n a, t) - f_par(n a + z, t)]
        - sum_{n>=2} f_par(n a - z, t)

    so the exact parallel velocity dispersion is
    -f_par(z, t) - f_par(a - z, t) + h. At late times h approaches
    gamma / t**2 times the w-combination
    w(1/gamma) - w(2(a+z)/t)/2 - w(2(2a-z)/t)/2 up to a light-cone
    sampling oscillation of order 1/(a t).
    """
    if not (0.0 < z < a):
        raise GeometryError(f"need 0 < z < a, got z={z}, a={a}")
    if t <= 0.0:
        return ReducedValue(0.0)
    horizon = int(math.ceil((0.5 * t + z) / a)) + 1
    total = 0.0
    n_next, size = 1, 64
    while n_next <= n_max:
        n = np.arange(n_next, n_next + size, dtype=float)
        base = n * a
        u0, up = t / (2.0 * base), t / (2.0 * (base + z))
        vals = 2.0 * _vel_parallel_scaled(u0) / base**2
        vals -= _vel_parallel_scaled(up) / (base + z) ** 2
        minus = base[n >= 2.0] - z
        um = t / (2.0 * minus)
        vals[n >= 2.0] -= _vel_parallel_scaled(um) / minus**2
        total += float(np.sum(vals))
        n_used = n_next + size - 1
        last = abs(float(vals[-1]))
        tail = last * n_used / 3.0
        if n_used >= horizon and tail <= rel_tol * max(abs(total), last, 1e-300):
            return ReducedValue(total, tail, n_used)
        n_next += size
        size *= 2
    raise ConvergenceError(f"h sum not converged by n_max={n_max}")


def recommend_regime(point):
    """Name the asymptotic regime for a point: large_a, intermediate, large_t."""
    geom, t = point.geometry, point.t
    if t <= min(2.0 * geom.z, 2.0 * geom.zbar) / REGIME_MARGIN:
        return "large_a"
    if point.gamma >= REGIME_MARGIN:
        return "large_t"
    return "intermediate"
