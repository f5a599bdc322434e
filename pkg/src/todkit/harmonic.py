"""Axisymmetric harmonic potentials generated by rod data.

The basic blocks are the single-nut potentials

    V0(rho, zeta) = 2 R - zeta log((R + zeta)/(R - zeta)),  R^2 = rho^2 + zeta^2
    H0(rho, zeta) = zeta R + (rho^2 / 2) log((R + zeta)/(R - zeta))

with V = sum_i a_i V0(rho, zeta - z_i) and H the conjugate potential
(H_rho = -rho V_zeta, H_zeta = rho V_rho) plus a gauge constant.  The
log ratio is always evaluated as 2 artanh(zeta/R) through the
cancellation-free branch log((R + |zeta|)/rho), so jets stay accurate
both near the axis and far out.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

from . import jets
from .errors import (
    AxisEvaluationError,
    InversionError,
    NutProximityError,
    RodDataError,
)
from .jets import Jet2

_EXACT = (int, Fraction)


def _is_exact(*values):
    return all(isinstance(v, _EXACT) for v in values)


# ---------------------------------------------------------------------------
# rod data


@dataclass(frozen=True)
class RodData:
    """Nut positions, weights, the constant c < 0, and the H gauge.

    gauge is either a number (the additive constant of H) or the string
    'symmetric', which picks the constant making the two semi-infinite
    axis constants satisfy F_first = -F_last.  mode 'ale' enforces
    sum(a_i) = 1; 'general' drops that one check (used e.g. to probe that
    the Toda identity holds for any harmonic V).
    """

    c: object
    zs: tuple
    weights: tuple
    gauge: object = "symmetric"
    mode: str = "ale"

    def __post_init__(self):
        object.__setattr__(self, "zs", tuple(self.zs))
        object.__setattr__(self, "weights", tuple(self.weights))
        if self.mode not in ("ale", "general"):
            raise RodDataError(f"unknown mode {self.mode!r}")
        if len(self.zs) == 0:
            raise RodDataError("need at least one nut")
        if len(self.zs) != len(self.weights):
            raise RodDataError("nut and weight counts differ")
        if not self.c < 0:
            raise RodDataError(f"c must be negative, got {self.c!r}")
        for za, zb in zip(self.zs, self.zs[1:]):
            if not za < zb:
                raise RodDataError("nut positions must be strictly increasing")
        for a in self.weights:
            if not a > 0:
                raise RodDataError("weights must be positive")
        if self.mode == "ale":
            total = sum(self.weights)
            if _is_exact(*self.weights):
                ok = total == 1
            else:
                ok = abs(float(total) - 1.0) < 1e-12
            if not ok:
                raise RodDataError(f"ALE data needs weights summing to 1, got {total}")

    @property
    def n(self):
        return len(self.zs)

    @property
    def span(self):
        return self.zs[-1] - self.zs[0]

    @property
    def scale(self):
        s = float(self.span)
        return s if s > 0 else 1.0

    @property
    def min_gap(self):
        if self.n < 2:
            return self.scale
        return float(min(zb - za for za, zb in zip(self.zs, self.zs[1:])))

    @property
    def is_exact(self):
        return _is_exact(self.c, *self.zs, *self.weights) and (
            self.gauge == "symmetric" or _is_exact(self.gauge)
        )

    def centroid(self):
        """Weight-averaged nut position sum a_i z_i (ALE weights sum to 1)."""
        return sum(a * z for a, z in zip(self.weights, self.zs))

    def interior_check(self, rho, zeta, rho_min=None, r_nut=None):
        """Reject points on the axis or inside a nut exclusion ball."""
        if rho_min is None:
            rho_min = 1e-8 * self.scale
        if r_nut is None:
            r_nut = 1e-6 * (self.min_gap if self.n > 1 else self.scale)
        if not rho > 0:
            raise AxisEvaluationError(f"rho = {rho} is not interior")
        if rho < rho_min:
            raise AxisEvaluationError(f"rho = {rho} below rho_min = {rho_min}")
        for z in self.zs:
            if math.hypot(float(rho), float(zeta) - float(z)) < r_nut:
                raise NutProximityError(f"point within {r_nut} of nut at z = {z}")


# ---------------------------------------------------------------------------
# single-nut potentials


def _halflog_ratio(r, z, zeta):
    """Jet of artanh(zeta/R) = (1/2) log((R+zeta)/(R-zeta)), branch-stable."""
    R = jets.sqrt(r * r + z * z)
    if zeta >= 0:
        return jets.log((R + z) / r), R
    return -jets.log((R - z) / r), R


def v0_jet(rho, zeta, order=4):
    """Jet of V0 at an interior point (rho > 0)."""
    if not rho > 0:
        raise AxisEvaluationError(f"V0 needs rho > 0, got rho = {rho}")
    r = Jet2.seed(float(rho), 0, order)
    z = Jet2.seed(float(zeta), 1, order)
    at, R = _halflog_ratio(r, z, float(zeta))
    return 2 * R - 2 * z * at


def h0_jet(rho, zeta, order=4):
    """Jet of the conjugate single-nut potential H0."""
    if not rho > 0:
        raise AxisEvaluationError(f"H0 needs rho > 0, got rho = {rho}")
    r = Jet2.seed(float(rho), 0, order)
    z = Jet2.seed(float(zeta), 1, order)
    at, R = _halflog_ratio(r, z, float(zeta))
    return z * R + r * r * at


def build_v(rods, rho, zeta, order=4):
    """Jet of V = sum a_i V0(rho, zeta - z_i)."""
    acc = Jet2.const(0.0, order)
    for z_i, a_i in zip(rods.zs, rods.weights):
        acc = acc + float(a_i) * v0_jet(rho, float(zeta) - float(z_i), order)
    return acc


def build_h(rods, rho, zeta, order=4):
    """Jet of H = sum a_i H0(rho, zeta - z_i) + gauge constant."""
    acc = Jet2.const(float(gauge_value(rods)), order)
    for z_i, a_i in zip(rods.zs, rods.weights):
        acc = acc + float(a_i) * h0_jet(rho, float(zeta) - float(z_i), order)
    return acc


# ---------------------------------------------------------------------------
# Ward coordinates


def ward_coords(rods, rho, zeta, order=4):
    """Jets of z = rho V_rho / 2 and x = -V_zeta / 2.

    For rod sums these collapse to z = sum a_i R_i and
    x = sum a_i artanh((zeta - z_i)/R_i), which is how they are built.
    """
    if not rho > 0:
        raise AxisEvaluationError(f"ward coordinates need rho > 0, got {rho}")
    r = Jet2.seed(float(rho), 0, order)
    zj = Jet2.const(0.0, order)
    xj = Jet2.const(0.0, order)
    for z_i, a_i in zip(rods.zs, rods.weights):
        s = Jet2.seed(float(zeta) - float(z_i), 1, order)
        at, R = _halflog_ratio(r, s, float(zeta) - float(z_i))
        zj = zj + float(a_i) * R
        xj = xj + float(a_i) * at
    return zj, xj


def ward_inverse(rods, z_target, x_target, guess, tol=1e-12, max_iter=60):
    """Invert (rho, zeta) -> (z, x) by Newton from a half-plane guess."""
    rho, zeta = float(guess[0]), float(guess[1])
    scale = max(abs(z_target), abs(x_target), 1.0)
    last = math.inf
    for _ in range(max_iter):
        if rho <= 0:
            rho = 1e-12 * rods.scale
        zj, xj = ward_coords(rods, rho, zeta, order=1)
        dz = zj.value - z_target
        dx = xj.value - x_target
        last = max(abs(dz), abs(dx))
        if last < tol * scale:
            return rho, zeta
        a, b = zj.partial(1, 0), zj.partial(0, 1)
        c, d = xj.partial(1, 0), xj.partial(0, 1)
        det = a * d - b * c
        if det == 0:
            raise InversionError(last, "singular Jacobian in ward_inverse")
        step_r = (dz * d - b * dx) / det
        step_z = (a * dx - dz * c) / det
        # keep the iterate in the open half-plane
        while rho - step_r <= 0:
            step_r *= 0.5
            step_z *= 0.5
        rho -= step_r
        zeta -= step_z
    raise InversionError(last)


def toda_residual(rods, rho, zeta):
    """Residual u_xx + (e^u)_zz for u = 2 log rho as a function of (z, x)."""
    Zj, Xj = ward_coords(rods, rho, zeta, order=2)
    P, _ = jets.invert_map(Zj, Xj, float(rho), float(zeta))
    u = 2 * jets.log(P)
    e_u = P * P
    return u.partial(0, 2) + e_u.partial(2, 0)


# ---------------------------------------------------------------------------
# axis data


@dataclass(frozen=True)
class AxisProfile:
    """Axis expansion data: V = f log rho^2 + g + O(rho^2).

    slopes[i] is f' on the open rod I_i (I_0 and I_n semi-infinite),
    values[i] = f(z_{i+1}); gauge is the resolved H constant.
    """

    rods: RodData
    slopes: tuple
    values: tuple
    gauge: object = field(repr=False, default=0)

    def rod_index(self, zeta):
        k = 0
        for z in self.rods.zs:
            if zeta > z:
                k += 1
        return k

    def f(self, zeta):
        return sum(a * abs(zeta - z) for a, z in zip(self.rods.weights, self.rods.zs))

    def g(self, zeta):
        """The O(1) axis term of V (away from nuts); float only."""
        total = 0.0
        for z, a in zip(self.rods.zs, self.rods.weights):
            s = abs(float(zeta) - float(z))
            total += float(a) * (2 * s - s * math.log(4 * s * s))
        return total

    def gpp(self, zeta):
        """g'' = axis limit of V_zetazeta = -sum 2 a_i / |zeta - z_i|."""
        return -sum(2 * a / abs(zeta - z) for a, z in zip(self.rods.weights, self.rods.zs))

    def h(self, zeta):
        """Axis limit of H: sum a_i s_i |s_i| + gauge."""
        return sum(a * (zeta - z) * abs(zeta - z)
                   for a, z in zip(self.rods.weights, self.rods.zs)) + self.gauge

    def f_constant(self, i, zeta=None):
        """The constant F_i = -(H(0,.) - f^2/f'_i)/c on a rod with slope != 0."""
        fp = self.slopes[i]
        if fp == 0:
            raise ZeroDivisionError(f"rod {i} has zero slope; F is not defined this way")
        if zeta is None:
            zeta = self._rod_point(i)
        f = self.f(zeta)
        return -(self.h(zeta) - f * f / fp) / self.rods.c

    def axis_w(self, zeta):
        """Axis limit of W on a rod with nonzero slope."""
        i = self.rod_index(zeta)
        fp = self.slopes[i]
        f = self.f(zeta)
        return (f + f * f * self.gpp(zeta) / (2 * fp * fp)) / self.rods.c

    def _rod_point(self, i):
        zs = self.rods.zs
        pad = self.rods.span if self.rods.n > 1 else 1
        pad = pad if pad > 0 else 1
        if i == 0:
            return zs[0] - pad
        if i == len(zs):
            return zs[-1] + pad
        num = zs[i - 1] + zs[i]
        return num / 2


def axis_profile(rods):
    """Slopes and nut values of f plus the resolved H gauge constant."""
    slopes, values = _slopes_values(rods)
    return AxisProfile(rods, slopes, values, gauge_value(rods))


def gauge_value(rods):
    """Resolve the H gauge constant; 'symmetric' balances the end rods."""
    if rods.gauge != "symmetric":
        return rods.gauge
    zero_gauge = AxisProfile(rods, *_slopes_values(rods), gauge=0)
    n = rods.n
    f_first = zero_gauge.f_constant(0)
    f_last = zero_gauge.f_constant(n)
    return rods.c * (f_first + f_last) / 2


def _slopes_values(rods):
    total = sum(rods.weights)
    slopes = []
    acc = 0
    for a in rods.weights:
        slopes.append(2 * acc - total)
        acc += a
    slopes.append(total)
    values = tuple(
        sum(a * abs(zn - z) for a, z in zip(rods.weights, rods.zs)) for zn in rods.zs
    )
    return tuple(slopes), values
