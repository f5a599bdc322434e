"""Quartic-root family in a two-parameter orthotoric chart.

The chart is (tau, phi, p, q) with structure function

    F(x) = a0 x^4 + a3 x^3 + a2 x^2 + a1 x + a0,

four real roots p1 < p2 < p3 < p4 whose product is one, and a0 > 0.
P = F(p) is positive on (p2, p3) and Q = F(q) negative on (p1, p2); the
metric lives on the open rectangle p in (p2, p3), q in (p1, p2) and
needs 1 - p^2 q^2 > 0 there.  The axis is the rectangle boundary with
rod vectors at the four edges; the corner (p2, p2) is the asymptotic
end.  Regularity of the three finite corners is two lattice relations

    l3 = -eps l1 + m l2,   l4 = -epsbar l2 + n l3

with integer m, n and eps = epsbar = 1.  The solved coefficients obey

    m / (eps epsbar) = (p3^2 - p2^2)/(1 - p2^2 p3^2)
    n eps            = (p1^2 - p2^2)/(1 - p1^2 p2^2)

and the scans certify that no root pattern meets all the conditions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import jets
from .errors import DomainError, RodDataError, SignatureError
from .jets import Jet2
from .tod import MetricJet

_EXACT = (int, Fraction)


def _is_integer(x, tol=1e-9):
    if isinstance(x, _EXACT):
        return Fraction(x).denominator == 1
    return abs(x - round(x)) <= tol * max(1.0, abs(x))


def _det2(u, v):
    return u[0] * v[1] - u[1] * v[0]


@dataclass(frozen=True)
class PdParams:
    """Root data of the structure function, roots increasing, product one."""

    roots: tuple
    a0: float = 1.0

    def __post_init__(self):
        if len(self.roots) != 4:
            raise RodDataError("four roots required")
        if not all(self.roots[i] < self.roots[i + 1] for i in range(3)):
            raise RodDataError("roots must be strictly increasing")
        if not self.a0 > 0:
            raise RodDataError("leading coefficient must be positive")
        prod = self.roots[0] * self.roots[1] * self.roots[2] * self.roots[3]
        if self.is_exact:
            if prod != 1:
                raise RodDataError("root product must be one")
        elif abs(prod - 1.0) > 1e-8:
            raise RodDataError("root product must be one")

    @classmethod
    def normalized(cls, roots, a0=1.0):
        prod = abs(roots[0] * roots[1] * roots[2] * roots[3])
        scale = prod ** 0.25
        return cls(roots=tuple(sorted(r / scale for r in roots)), a0=a0)

    @property
    def is_exact(self):
        return all(isinstance(r, _EXACT) for r in self.roots) and isinstance(
            self.a0, _EXACT)

    @property
    def coefficients(self):
        """(a0, a1, a2, a3); the constant term equals a0 by the root product."""
        p1, p2, p3, p4 = self.roots
        a3 = -self.a0 * (p1 + p2 + p3 + p4)
        a2 = self.a0 * (p1 * p2 + p1 * p3 + p1 * p4 + p2 * p3 + p2 * p4 + p3 * p4)
        a1 = -self.a0 * (p1 * p2 * p3 + p1 * p2 * p4 + p1 * p3 * p4 + p2 * p3 * p4)
        return (self.a0, a1, a2, a3)

    @property
    def selfdual(self):
        a0, a1, _, a3 = self.coefficients
        if self.is_exact:
            return a3 == a1
        return abs(a3 - a1) <= 1e-12 * max(1.0, abs(a3), abs(a1), a0)

    @property
    def flat(self):
        a0, a1, _, a3 = self.coefficients
        if self.is_exact:
            return a3 == 0 and a1 == 0
        return max(abs(a3), abs(a1)) <= 1e-12 * max(1.0, a0)

    @property
    def rectangle_ok(self):
        """Whether 1 - p^2 q^2 stays nonnegative on the closed rectangle."""
        p1, p2, p3, _ = self.roots
        return max(abs(p2), abs(p3)) * max(abs(p1), abs(p2)) <= 1

    def quartic(self, x):
        a0, a1, a2, a3 = self.coefficients
        return (((x * a0 + a3) * x + a2) * x + a1) * x + a0

    def quartic_prime(self, x):
        a0, a1, a2, a3 = self.coefficients
        return ((x * 4 * a0 + 3 * a3) * x + 2 * a2) * x + a1


def pd_metric(params, p, q, order=4):
    """Metric jets at an interior point of the (p, q) rectangle."""
    r1, r2, r3, _ = (float(r) for r in params.roots)
    p = float(p)
    q = float(q)
    if not r2 < p < r3:
        raise DomainError("pd_metric", p, "p must lie between the middle roots")
    if not r1 < q < r2:
        raise DomainError("pd_metric", q, "q must lie between the lower roots")
    pj = Jet2.seed(p, 0, order)
    qj = Jet2.seed(q, 1, order)
    P = params.quartic(pj)
    Q = params.quartic(qj)
    if not P.value > 0 or not Q.value < 0:
        raise DomainError("pd_metric", (p, q), "structure function signs")
    one = Jet2.const(1.0, order)
    pq = pj * qj
    rect = one - pq * pq
    if not rect.value > 0:
        raise SignatureError("metric needs 1 - p^2 q^2 > 0")
    diff = pj - qj
    den = diff * diff * rect
    g_tt = (P * qj ** 4 - Q) / den
    g_ff = (P - Q * pj ** 4) / den
    g_tf = (Q * pj * pj - P * qj * qj) / den
    g_pp = rect / (diff * diff * P)
    g_qq = rect / (diff * diff * Q) * (-1.0)
    zero = Jet2.const(0.0, order)
    comp = (
        (g_tt, g_tf, zero, zero),
        (g_tf, g_ff, zero, zero),
        (zero, zero, g_pp, zero),
        (zero, zero, zero, g_qq),
    )
    return MetricJet(coords=("tau", "phi", "p", "q"), comp=comp,
                     base=(p, q), orientation=1)


def pd_rod_vectors(params):
    """2 pi normalized vanishing combinations on the four boundary edges.

    Order along the boundary: l1 on p = p2, l2 on q = p1, l3 on p = p3,
    l4 on q = p2.  Exact root data gives exact vectors.
    """
    p1, p2, p3, _ = params.roots
    two = 2 if params.is_exact else 2.0
    dp2 = params.quartic_prime(p2)
    dp3 = params.quartic_prime(p3)
    dq1 = params.quartic_prime(p1)
    l1 = (two * p2 * p2 / dp2, two / dp2)
    l2 = (two / dq1, two * p1 * p1 / dq1)
    l3 = (two * p3 * p3 / dp3, two / dp3)
    l4 = (two / dp2, two * p2 * p2 / dp2)
    return (l1, l2, l3, l4)


@dataclass(frozen=True)
class PdRegularity:
    vectors: tuple
    eps: object
    epsbar: object
    m_raw: object
    n_raw: object
    m: object
    n: object
    collinear_12: bool
    collinear_34: bool
    end_det: object
    ok: bool


def pd_regularity(params, tol=1e-9):
    """Solve both corner relations and cross-check the closed forms.

    Collinear basis pairs leave the affected relation unsolved (None);
    either way the data fails unless eps = epsbar = 1 with integer m, n.
    """
    p1, p2, p3, _ = params.roots
    vecs = pd_rod_vectors(params)
    l1, l2, l3, l4 = vecs
    scale = max(abs(c) for v in vecs for c in v)
    d12 = _det2(l1, l2)
    d23 = _det2(l2, l3)
    d34 = _det2(l3, l4)

    def _zero(d):
        if params.is_exact:
            return d == 0
        return abs(d) <= 1e-14 * scale * scale

    eps = m_raw = None
    if not _zero(d12):
        eps = -_det2(l3, l2) / d12
        m_raw = _det2(l1, l3) / d12
    epsbar = n_raw = None
    if not _zero(d23):
        epsbar = -_det2(l4, l3) / d23
        n_raw = _det2(l2, l4) / d23

    def _ratio(num, den):
        if params.is_exact:
            return num / den if den != 0 else None
        return num / den if abs(den) > 1e-12 * max(1.0, abs(num)) else None

    # the closed forms lose meaning exactly where the relation basis
    # degenerates (reciprocal root pairs)
    m_simp = _ratio(p3 * p3 - p2 * p2, 1 - p2 * p2 * p3 * p3)
    n_simp = _ratio(p1 * p1 - p2 * p2, 1 - p1 * p1 * p2 * p2)
    if m_simp is not None and not _zero(d34) and eps is not None \
            and epsbar is not None and abs(float(eps * epsbar)) > 1e-12:
        ratio = m_raw / (eps * epsbar)
        if params.is_exact:
            assert ratio == m_simp
        else:
            assert abs(ratio - m_simp) <= 1e-8 * max(1.0, abs(m_simp))
    if n_simp is not None and eps is not None and n_raw is not None:
        prod = n_raw * eps
        if params.is_exact:
            assert prod == n_simp
        else:
            assert abs(prod - n_simp) <= 1e-8 * max(1.0, abs(n_simp))

    def _is_one(x):
        if x is None:
            return False
        if params.is_exact:
            return x == 1
        return abs(x - 1) <= tol
    ok = (_is_one(eps) and _is_one(epsbar)
          and m_raw is not None and _is_integer(m_raw, tol)
          and n_raw is not None and _is_integer(n_raw, tol))
    return PdRegularity(vectors=vecs, eps=eps, epsbar=epsbar,
                        m_raw=m_raw, n_raw=n_raw, m=m_simp, n=n_simp,
                        collinear_12=_zero(d12), collinear_34=_zero(d34),
                        end_det=_det2(l4, l1), ok=ok)


def selfdual_roots(case, u, v):
    """Reciprocal-pair root sets: case a is (u, v, 1/v, 1/u) with
    0 < u < v < 1, case b is (u, 1/u, v, 1/v) with u < -1 and 0 < v < 1."""
    if case == "a":
        if not 0 < u < v < 1:
            raise RodDataError("case a needs 0 < u < v < 1")
        return (u, v, 1 / v, 1 / u)
    if case == "b":
        if not u < -1 or not 0 < v < 1:
            raise RodDataError("case b needs u < -1 and 0 < v < 1")
        return (u, 1 / u, v, 1 / v)
    raise RodDataError(f"unknown self-dual case {case!r}")


def pd_selfdual_check(params, tol=1e-10):
    """Certificates for palindromic root sets: one rod pair is exactly
    opposite and the surviving corner coefficient cannot reach one."""
    if not params.selfdual:
        raise RodDataError("root set is not palindromic")
    p1, p2, p3, _ = params.roots
    reg = pd_regularity(params)
    out = {"flat": params.flat, "regular": reg.ok}

    def _ratio(num, den):
        return num / den if abs(float(den)) > 1e-12 else None

    if p1 > 0:
        # case a: p3 = 1/p2, p4 = 1/p1
        ratio = -params.quartic_prime(p2) / params.quartic_prime(p3)
        pair_residual = abs(float(ratio - p2 * p2))
        den = 1 - p1 * p1 * p2 * p2
        eps_closed = _ratio(p2 * p2 - p1 * p1, den)
        out.update({
            "case": "a",
            "opposite_pair": (3, 4),
            "pair_identity_residual": pair_residual,
            "collinear": reg.collinear_34,
            "eps": reg.eps,
            "eps_closed": eps_closed,
            "eps_gap": _ratio((1 - p2 * p2) * (1 + p1 * p1), den),
        })
        assert pair_residual <= tol
        if eps_closed is not None and reg.eps is not None:
            assert abs(float(reg.eps - eps_closed)) <= tol
    else:
        # case b: p2 = 1/p1, p4 = 1/p3
        ratio = -params.quartic_prime(p1) / params.quartic_prime(p2)
        pair_residual = abs(float(ratio - p1 * p1))
        den = 1 - p1 * p1 * p3 * p3
        epsbar_closed = _ratio(p1 * p1 - p3 * p3, den)
        out.update({
            "case": "b",
            "opposite_pair": (1, 2),
            "pair_identity_residual": pair_residual,
            "collinear": reg.collinear_12,
            "epsbar": reg.epsbar,
            "epsbar_closed": epsbar_closed,
            "epsbar_gap": _ratio((p1 * p1 - 1) * (1 + p3 * p3), den),
        })
        assert pair_residual <= tol
        if epsbar_closed is not None and reg.epsbar is not None:
            assert abs(float(reg.epsbar - epsbar_closed)) <= tol
    return out


def _sample_roots(case, rng):
    """One sampling attempt; None when the draw violates the rectangle
    or degenerates."""
    if case in ("i", "ii", "iii"):
        signs = {"i": (1, 1, 1, 1), "ii": (-1, -1, 1, 1),
                 "iii": (-1, -1, -1, -1)}[case]
        mags = np.exp(rng.uniform(math.log(0.05), math.log(20.0), size=4))
        vals = sorted(s * m for s, m in zip(signs, mags))
        prod = abs(vals[0] * vals[1] * vals[2] * vals[3])
        roots = tuple(v / prod ** 0.25 for v in vals)
        gaps = min(roots[i + 1] - roots[i] for i in range(3))
        if gaps < 1e-3:
            return None
        if case != "iii" and max(abs(roots[1]), abs(roots[2])) * max(abs(roots[0]), abs(roots[1])) >= 1:
            # all-negative quadruples never pass this filter; they are
            # kept and rejected through their corner certificate instead
            return None
        return roots
    if case == "a":
        u, v = sorted(np.exp(rng.uniform(math.log(0.05), math.log(0.95), size=2)))
        if v - u < 1e-3 or 1 / v - v < 1e-3:
            return None
        return (u, v, 1 / v, 1 / u)
    if case == "b":
        u = -math.exp(rng.uniform(math.log(1.05), math.log(20.0)))
        v = math.exp(rng.uniform(math.log(0.02), math.log(0.95)))
        if abs(u) * v >= 1 - 1e-6 or v - 1 / u < 1e-3 or 1 / v - v < 1e-3:
            return None
        return (u, 1 / u, v, 1 / v)
    raise RodDataError(f"unknown scan case {case!r}")


@dataclass(frozen=True)
class PdScanResult:
    case: str
    samples: int
    attempts: int
    admissible: int
    certificates: dict
    seed: int


def pd_scan(case, samples=1000, seed=7):
    """Sample root sets of one sign pattern and count regular ones.

    Every accepted sample must carry its rejection certificate: the
    noninteger corner coefficient for positive roots, epsbar > 1 for a
    negative lower pair, the curvature bound cutting off the corner for
    all-negative roots, and the opposite rod pair with eps (or epsbar)
    away from one in the palindromic cases.
    """
    rng = np.random.default_rng(seed)
    admissible = 0
    certificates = {}
    attempts = 0
    accepted = 0
    limit = 200 * samples + 1000
    while accepted < samples:
        attempts += 1
        if attempts > limit:
            raise RodDataError("sampling failed to reach the requested count")
        roots = _sample_roots(case, rng)
        if roots is None:
            continue
        accepted += 1
        params = PdParams(roots=roots)
        reg = pd_regularity(params)
        if reg.ok:
            admissible += 1
            continue
        if case == "i":
            assert -1 < reg.n < 0
            cert = "n strictly between -1 and 0"
        elif case == "ii":
            assert reg.epsbar > 1
            cert = "epsbar exceeds 1"
        elif case == "iii":
            # sorted negative roots with product one force |p1 p2| > 1,
            # so the curvature bound crosses the rectangle and cuts off
            # the corner fixed point before any lattice count applies
            p1, p2, p3 = roots[0], roots[1], roots[2]
            assert p3 * p3 < p2 * p2 < p1 * p1
            assert p1 * p1 * p2 * p2 > 1
            cert = "curvature bound inside the rectangle, corner cut off"
        elif case == "a":
            assert reg.collinear_34 and 0 < reg.eps < 1
            cert = "rods 3 and 4 opposite, eps below 1"
        else:
            assert reg.collinear_12 and reg.epsbar > 1
            cert = "rods 1 and 2 opposite, epsbar exceeds 1"
        certificates[cert] = certificates.get(cert, 0) + 1
    return PdScanResult(case=case, samples=samples, attempts=attempts,
                        admissible=admissible, certificates=certificates,
                        seed=seed)


def pd_ale_limit(params, r, theta, c_pd=1.0):
    """Compare the corner chart at one point against the flat Hopf model.

    The corner substitution p = p2 + c cos^2(theta/2)/(2 r^2), q = p2 -
    c sin^2(theta/2)/(2 r^2) with tau, phi combined through P'(p2)
    matches

        s [dr^2 + (r^2/4)((dpsi + cos theta dphit)^2 + dtheta^2
                          + sin^2 theta dphit^2)]

    with s = 8 (1 - p2^4)/(c P'(p2)) to leading order.  The raw
    substitution leaves a first correction of relative size r^-2 that
    is a pure change of chart: shifting

        r     -> r - (alpha + beta) cos(theta)/(4 r)
        theta -> theta + (alpha + 2 beta) sin(theta)/(4 r^2)

    with alpha = c F''(p2)/(2 F'(p2)) and beta = 2 c p2^3/(1 - p2^4)
    cancels that correction in every component, so the deviation
    measured in an orthonormal frame of the model falls off like r^-4.
    The report carries the frame deviation, the model scale, and the
    radial component of the pulled back metric as a direct prefactor
    measurement.
    """
    if c_pd == 0:
        raise DomainError("pd_ale_limit", c_pd, "corner constant must be nonzero")
    if not 0 < theta < math.pi:
        raise DomainError("pd_ale_limit", theta, "polar angle must avoid the axis")
    p2 = float(params.roots[1])
    dp2 = float(params.quartic_prime(p2))
    a0, a1, a2, a3 = [float(x) for x in params.coefficients]
    ddp2 = 12.0 * a0 * p2 * p2 + 6.0 * a3 * p2 + 2.0 * a2
    scale = 8.0 * (1.0 - p2 ** 4) / (c_pd * dp2)
    if not scale > 0:
        raise DomainError("pd_ale_limit", scale, "corner scale must be positive")
    alpha = c_pd * ddp2 / (2.0 * dp2)
    beta = 2.0 * c_pd * p2 ** 3 / (1.0 - p2 ** 4)
    rj = Jet2.seed(float(r), 0, 2)
    tj = Jet2.seed(float(theta), 1, 2)
    rs = rj - jets.cos(tj) * ((alpha + beta) / 4.0) / rj
    ts = tj + jets.sin(tj) * ((alpha + 2.0 * beta) / 4.0) / (rj * rj)
    half = ts * 0.5
    p = jets.cos(half) * jets.cos(half) * (c_pd / 2.0) / (rs * rs) + p2
    q = jets.sin(half) * jets.sin(half) * (-c_pd / 2.0) / (rs * rs) + p2
    g_old = pd_metric(params, p.value, q.value, order=1).values()
    a = (1.0 + p2 * p2) / dp2
    b = (1.0 - p2 * p2) / dp2
    jac = np.zeros((4, 4))
    jac[0, 0] = a
    jac[0, 1] = -b
    jac[1, 0] = a
    jac[1, 1] = b
    jac[2, 2] = p.partial(1, 0)
    jac[2, 3] = p.partial(0, 1)
    jac[3, 2] = q.partial(1, 0)
    jac[3, 3] = q.partial(0, 1)
    g_new = jac.T @ g_old @ jac
    model = np.zeros((4, 4))
    model[0, 0] = scale * r * r / 4.0
    model[0, 1] = model[1, 0] = scale * r * r * math.cos(theta) / 4.0
    model[1, 1] = scale * r * r / 4.0
    model[2, 2] = scale
    model[3, 3] = scale * r * r / 4.0
    frame = np.linalg.cholesky(model)
    dev = np.linalg.solve(frame, np.linalg.solve(frame, g_new).T).T - np.eye(4)
    return {"scale": scale, "deviation": float(np.linalg.norm(dev)),
            "scale_measured": float(g_new[2, 2]), "base": (p.value, q.value)}
