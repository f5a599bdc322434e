"""Metric and fundamental form in Weyl-Papapetrou form from rod data.

With A = sum a_i R_i, B = sum a_i / R_i, C = sum a_i s_i / R_i (s_i the
shifted heights) and D = B^2 rho^2 + C^2, the metric fields are

    W     = (A / c) K / D
    e^2nu = A K / c
    F     = -(A M + P K + gauge D) / (c D)
    K     = - sum_{i<j} a_i a_j (z_j - z_i)^2 / (R_i R_j)
    M     =   sum_{i<j} a_i a_j (z_j - z_i)^2 (s_i + s_j) / (R_i R_j)
    P     =   sum_i a_i s_i R_i

which are the standard quotient expressions in V-derivatives with the
cancelling numerators resummed into the gap-squared weighted pair sums
K and M (F literally reads (A^2 C / D + x rho^2 - H) / c before the
resummation).  The resummed forms are exact (tests compare them against
the literal quotients) and keep full relative precision far from the
nuts, where the literal numerators lose all their digits; they also
make W == 0 manifest for single-nut data.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import harmonic, jets
from .errors import AxisEvaluationError, DegenerateMetricError, DomainError
from .harmonic import RodData
from .jets import Jet2


@dataclass(frozen=True)
class TodFields:
    """Jets of the metric fields at one interior point."""

    W: Jet2
    e2nu: Jet2
    F: Jet2
    z: Jet2
    x: Jet2
    rods: RodData = field(repr=False, default=None)
    point: tuple = None


@dataclass(frozen=True)
class MetricJet:
    """Metric components as jets in the two essential coordinates.

    Components are indexed by the chart ordering in coords; the first two
    directions are Killing directions, so all derivatives are taken with
    respect to the trailing pair.  orientation is the sign of the chart
    volume form relative to the convention in which the fundamental form
    squares to a positive top form.
    """

    coords: tuple
    comp: list
    base: tuple
    orientation: int = 1

    @property
    def order(self):
        return self.comp[0][0].order

    def values(self):
        return np.array([[self.comp[i][j].value for j in range(4)] for i in range(4)])

    def d1(self):
        """First derivatives, shape (2, 4, 4), essential directions only."""
        out = np.zeros((2, 4, 4))
        for k, key in enumerate(((1, 0), (0, 1))):
            for i in range(4):
                for j in range(4):
                    out[k, i, j] = self.comp[i][j].partial(*key)
        return out

    def d2(self):
        """Second derivatives, shape (2, 2, 4, 4)."""
        out = np.zeros((2, 2, 4, 4))
        keys = {(0, 0): (2, 0), (0, 1): (1, 1), (1, 0): (1, 1), (1, 1): (0, 2)}
        for (p, q), key in keys.items():
            for i in range(4):
                for j in range(4):
                    out[p, q, i, j] = self.comp[i][j].partial(*key)
        return out


@dataclass(frozen=True)
class TwoFormJet:
    """Antisymmetric two-form components as jets, same layout as MetricJet."""

    coords: tuple
    comp: list
    base: tuple

    @property
    def order(self):
        return self.comp[0][1].order

    def values(self):
        return np.array([[self.comp[i][j].value for j in range(4)] for i in range(4)])

    def d1(self):
        out = np.zeros((2, 4, 4))
        for k, key in enumerate(((1, 0), (0, 1))):
            for i in range(4):
                for j in range(4):
                    out[k, i, j] = self.comp[i][j].partial(*key)
        return out

    def d2(self):
        out = np.zeros((2, 2, 4, 4))
        keys = {(0, 0): (2, 0), (0, 1): (1, 1), (1, 0): (1, 1), (1, 1): (0, 2)}
        for (p, q), key in keys.items():
            for i in range(4):
                for j in range(4):
                    out[p, q, i, j] = self.comp[i][j].partial(*key)
        return out


# ---------------------------------------------------------------------------


def tod_fields(rods, rho, zeta, order=4, check_interior=True):
    """Metric fields W, e^2nu, F and Ward coordinates z, x as jets."""
    if check_interior:
        rods.interior_check(rho, zeta)
    elif not rho > 0:
        raise AxisEvaluationError(f"tod_fields needs rho > 0, got {rho}")
    rho = float(rho)
    zeta = float(zeta)
    c = float(rods.c)
    r = Jet2.seed(rho, 0, order)
    radii = []
    shifts = []
    A = Jet2.const(0.0, order)
    B = Jet2.const(0.0, order)
    C = Jet2.const(0.0, order)
    T = Jet2.const(0.0, order)
    for z_i, a_i in zip(rods.zs, rods.weights):
        a_i = float(a_i)
        s = Jet2.seed(zeta - float(z_i), 1, order)
        at, R = harmonic._halflog_ratio(r, s, zeta - float(z_i))
        radii.append(R)
        shifts.append(s)
        A = A + a_i * R
        B = B + a_i / R
        C = C + a_i * (s / R)
        T = T + a_i * at
    K = Jet2.const(0.0, order)
    M = Jet2.const(0.0, order)
    for i in range(len(radii)):
        for j in range(i + 1, len(radii)):
            gap = float(rods.zs[j]) - float(rods.zs[i])
            pair = (float(rods.weights[i]) * float(rods.weights[j]) * gap * gap) / (
                radii[i] * radii[j]
            )
            K = K - pair
            M = M + pair * (shifts[i] + shifts[j])
    den = B * B * (r * r) + C * C
    W = (A / c) * K / den
    e2nu = A * K * (1.0 / c)
    # A^2 C / den + x rho^2 - H resummed over pairs: the terms of order
    # R^2 cancel exactly, leaving gap-squared weighted sums that keep
    # full relative precision in the far field
    P = Jet2.const(0.0, order)
    for a_i, s, R in zip(rods.weights, shifts, radii):
        P = P + float(a_i) * s * R
    gamma = float(harmonic.gauge_value(rods))
    F = -(A * M + P * K + gamma * den) / den / c
    return TodFields(W=W, e2nu=e2nu, F=F, z=A, x=T, rods=rods, point=(rho, zeta))


def tod_metric(fields, order=None):
    """Assemble the metric jets from the fields; needs W > 0."""
    W, F, e2nu = fields.W, fields.F, fields.e2nu
    if not W.value > 0:
        raise DegenerateMetricError(f"W = {W.value} is not positive")
    if not e2nu.value > 0:
        raise DegenerateMetricError(f"e^2nu = {e2nu.value} is not positive")
    m = order if order is not None else W.order
    W = W.truncate(m)
    F = F.truncate(m)
    e2nu = e2nu.truncate(m)
    rho = fields.point[0]
    r = Jet2.seed(rho, 0, m)
    zero = Jet2.const(0.0, m)
    g_tt = 1 / W
    g_ty = F / W
    g_yy = W * (r * r) + F * F / W
    comp = [
        [g_tt, g_ty, zero, zero],
        [g_ty, g_yy, zero, zero],
        [zero, zero, e2nu, zero],
        [zero, zero, zero, e2nu],
    ]
    return MetricJet(coords=("tau", "y", "rho", "zeta"), comp=comp,
                     base=fields.point, orientation=1)


def fundamental_form(fields, order=None):
    """The two-form (dtau + F dy) ^ dz + W rho^2 dx ^ dy as jets.

    Entries come out one order below the fields because they carry first
    derivatives of the Ward coordinates.
    """
    m = fields.z.order - 1 if order is None else order
    z_r = fields.z.derivative(0).truncate(m)
    z_z = fields.z.derivative(1).truncate(m)
    x_r = fields.x.derivative(0).truncate(m)
    x_z = fields.x.derivative(1).truncate(m)
    W = fields.W.truncate(m)
    F = fields.F.truncate(m)
    rho = fields.point[0]
    r = Jet2.seed(rho, 0, m)
    rr = r * r
    w_tr = z_r
    w_tz = z_z
    w_yr = F * z_r - W * rr * x_r
    w_yz = F * z_z - W * rr * x_z
    zero = Jet2.const(0.0, m)
    comp = [
        [zero, zero, w_tr, w_tz],
        [zero, zero, w_yr, w_yz],
        [-w_tr, -w_yr, zero, zero],
        [-w_tz, -w_yz, zero, zero],
    ]
    return TwoFormJet(coords=("tau", "y", "rho", "zeta"), comp=comp, base=fields.point)


# ---------------------------------------------------------------------------
# the closed-form benchmark metric


def eh_rod_data(a=1.0, gauge="symmetric"):
    """Rod data of the benchmark two-nut metric with bolt parameter a."""
    q = a * a / 4
    return RodData(c=-(a ** 4) / 16, zs=(-q, q), weights=(0.5, 0.5), gauge=gauge)


def eh_closed_form(a, r, theta, order=2):
    """Closed-form benchmark metric jets in the chart (tau, phi, r, theta).

    g = f (r^2/4)(dtau + cos t dphi)^2 + dr^2/f + (r^2/4)(dt^2 + sin^2 t dphi^2)
    with f = 1 - (a/r)^4.  The chart is negatively oriented relative to
    the Weyl-Papapetrou convention, recorded in the orientation field.
    """
    if not r > a:
        raise DomainError("eh_closed_form", r, f"r = {r} not outside the bolt radius {a}")
    rj = Jet2.seed(float(r), 0, order)
    tj = Jet2.seed(float(theta), 1, order)
    f = 1 - (Jet2.const(float(a), order) / rj) ** 4
    quarter = rj * rj * 0.25
    ct = jets.cos(tj)
    st = jets.sin(tj)
    g_tt = f * quarter
    g_tp = f * quarter * ct
    g_pp = f * quarter * ct * ct + quarter * st * st
    g_rr = 1 / f
    g_hh = quarter
    zero = Jet2.const(0.0, order)
    comp = [
        [g_tt, g_tp, zero, zero],
        [g_tp, g_pp, zero, zero],
        [zero, zero, g_rr, zero],
        [zero, zero, zero, g_hh],
    ]
    return MetricJet(coords=("tau", "phi", "r", "theta"), comp=comp,
                     base=(float(r), float(theta)), orientation=-1)


def eh_coords(a, r, theta, order=2):
    """Jets of (rho, zeta) as functions of (r, theta) for the benchmark.

    rho = sqrt(r^4 - a^4) sin(theta)/4, zeta = r^2 cos(theta)/4.
    """
    if not r > a:
        raise DomainError("eh_coords", r, f"r = {r} not outside the bolt radius {a}")
    if not 0 < theta < math.pi:
        raise AxisEvaluationError(f"theta = {theta} is on the axis")
    rj = Jet2.seed(float(r), 0, order)
    tj = Jet2.seed(float(theta), 1, order)
    root = jets.sqrt(rj ** 4 - a ** 4)
    rho = root * jets.sin(tj) * 0.25
    zeta = rj * rj * jets.cos(tj) * 0.25
    return rho, zeta


def rescale(rods, alpha):
    """The homothety action on rod data: c -> alpha c, z_i -> alpha z_i.

    Weights are untouched; a numeric H gauge scales as alpha^2 with the
    conjugate potential.
    """
    if not alpha > 0:
        raise DomainError("rescale", alpha, "scale factor must be positive")
    gauge = rods.gauge
    if gauge != "symmetric":
        gauge = gauge * alpha * alpha
    return RodData(
        c=rods.c * alpha,
        zs=tuple(z * alpha for z in rods.zs),
        weights=rods.weights,
        gauge=gauge,
        mode=rods.mode,
    )
