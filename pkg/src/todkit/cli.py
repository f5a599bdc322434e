"""Command line front end: rod files, verification suites, and reports.

Subcommands: build samples the metric fields on a grid to CSV, verify
runs the invariant suites against a rod file and emits a JSON report,
classify prints the admissible-family search with certificates, and pd
dispatches the quartic-root family checks and scans.

Rod files are JSON: {"mode": "ale", "c": -0.0625, "rods": [{"z": -0.25,
"a": 0.5}, {"z": 0.25, "a": 0.5}], "gauge": {"h_constant": "symmetric"}}.
Numbers may be decimal or p/q strings, which opt in to exact-rational
evaluation where the receiving routine supports it.

Exit codes: 0 all checks pass, 1 verification or evaluation failure,
2 malformed input.  Reports are deterministic for a fixed input file and
seed: keys are sorted, floats use shortest round-trip notation, and no
timestamps or environment details are recorded.  All loops are serial,
so thread count cannot reorder any reduction.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from fractions import Fraction

import numpy as np

from . import __version__, classify, cky, curvature, harmonic, pd, rods, tod
from .cky import FlatCkyParams
from .errors import RodDataError, TodkitError
from .harmonic import RodData

SCHEMA = "todkit-report-1"

DECAY_RADII = tuple(100.0 * 100.0 ** (i / 4) for i in range(5))

DEFAULT_TOLS = {
    "killing_det": 1e-12,
    "harmonic_v": 1e-12,
    "conjugate_pair": 1e-12,
    "toda": 1e-7,
    "norm_identity": 1e-11,
    "ricci_ratio": 1e-7,
    "weyl_spectrum": 1e-7,
    "lambda_z3": 1e-7,
    "conformal_factor": 1e-8,
    "gl2z": 1e-9,
    "conical": 1e-6,
    "flat_family_residual": 1e-12,
    "flat_norm_formula": 1e-12,
    "candidate_residual": 1e-8,
    "candidate_killing": 1e-8,
    "decay_exponent": 0.1,
}


# ---------------------------------------------------------------------------
# rod file ingestion


def _number(raw, field):
    """Accept JSON numbers, and decimal or p/q strings as exact rationals."""
    if isinstance(raw, str):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            raise RodDataError(f"{field}: cannot parse {raw!r} as a rational")
    if isinstance(raw, bool) or not isinstance(raw, (int, float)):
        raise RodDataError(f"{field}: expected a number, got {raw!r}")
    return raw


def load_rod_file(path):
    """Parse and validate a rod file; returns (RodData, sha256 hex)."""
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise RodDataError(f"cannot read rod file: {exc}")
    try:
        doc = json.loads(blob)
    except json.JSONDecodeError as exc:
        raise RodDataError(f"rod file is not valid JSON: {exc}")
    if not isinstance(doc, dict):
        raise RodDataError("rod file must hold a JSON object")
    for key in ("c", "rods"):
        if key not in doc:
            raise RodDataError(f"rod file is missing {key!r}")
    entries = doc["rods"]
    if not isinstance(entries, list) or not entries:
        raise RodDataError('"rods" must be a non-empty list')
    zs, weights = [], []
    for k, entry in enumerate(entries):
        if not isinstance(entry, dict) or "z" not in entry or "a" not in entry:
            raise RodDataError(f'rod {k} must be an object with "z" and "a"')
        zs.append(_number(entry["z"], f"rods[{k}].z"))
        weights.append(_number(entry["a"], f"rods[{k}].a"))
    gauge = doc.get("gauge", {"h_constant": "symmetric"})
    if not isinstance(gauge, dict) or "h_constant" not in gauge:
        raise RodDataError('gauge must be an object with an "h_constant" entry')
    h_constant = gauge["h_constant"]
    if h_constant != "symmetric":
        h_constant = _number(h_constant, "gauge.h_constant")
    data = RodData(c=_number(doc["c"], "c"), zs=tuple(zs),
                   weights=tuple(weights), gauge=h_constant,
                   mode=doc.get("mode", "ale"))
    return data, hashlib.sha256(blob).hexdigest()


# ---------------------------------------------------------------------------
# report plumbing


def _plain(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (str, int, float, bool)) or value is None:
        return value
    return str(value)


def _check(name, measured, tolerance, location="", good=None):
    if good is None:
        good = measured <= tolerance
    return {"name": name, "status": "pass" if good else "fail",
            "measured": _plain(measured), "tolerance": _plain(tolerance),
            "location": location}


def _skip(name, location):
    return {"name": name, "status": "skip", "measured": None,
            "tolerance": None, "location": location}


def make_report(suite, checks, input_hash, seed):
    summary = {"pass": 0, "fail": 0, "skip": 0}
    for entry in checks:
        summary[entry["status"]] += 1
    return {
        "schema": SCHEMA,
        "suite": suite,
        "status": "fail" if summary["fail"] else "pass",
        "checks": checks,
        "summary": summary,
        "metadata": {"input_sha256": input_hash, "seed": seed,
                     "version": __version__},
    }


def render_report(report):
    return json.dumps(report, sort_keys=True, indent=2) + "\n"


def _emit(text, out):
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _loc(rho, zeta):
    return f"rho={rho:.6g}, zeta={zeta:.6g}"


def sample_interior(data, count, rng):
    lo = float(data.zs[0]) - 0.75 * data.scale
    hi = float(data.zs[-1]) + 0.75 * data.scale
    points = []
    while len(points) < count:
        rho = data.scale * float(10.0 ** rng.uniform(-1.0, 0.45))
        zeta = float(rng.uniform(lo, hi))
        try:
            data.interior_check(rho, zeta)
        except TodkitError:
            continue
        points.append((rho, zeta))
    return points


class _Worst:
    """Track the largest residual and where it happened."""

    def __init__(self):
        self.value = 0.0
        self.location = ""

    def push(self, value, location):
        if value >= self.value:
            self.value = float(value)
            self.location = location


# ---------------------------------------------------------------------------
# suites


def suite_fields(data, seed, tols):
    if data.n == 1:
        cert = classify.verify_n1_degenerate(rods=data)
        checks = [{
            "name": "w_identically_zero", "status": "fail",
            "measured": cert["max_abs_w_jet"], "tolerance": None,
            "location": f"W jets vanish on a grid of {cert['points']} points; "
                        "single-nut data gives a degenerate metric",
        }]
        for name in ("killing_det", "harmonic_v", "conjugate_pair", "toda",
                     "norm_identity", "positivity"):
            checks.append(_skip(name, "degenerate single-nut data"))
        return checks

    rng = np.random.default_rng(seed)
    points = sample_interior(data, 25, rng)
    det_w = _Worst()
    harm_w = _Worst()
    conj_w = _Worst()
    toda_w = _Worst()
    norm_w = _Worst()
    positive = _Worst()
    min_field = math.inf
    for rho, zeta in points:
        loc = _loc(rho, zeta)
        f = tod.tod_fields(data, rho, zeta, order=3)
        g = tod.tod_metric(f)
        gv = g.values()
        det = gv[0, 0] * gv[1, 1] - gv[0, 1] * gv[0, 1]
        det_w.push(abs(det - rho * rho) / (rho * rho), loc)

        v = harmonic.build_v(data, rho, zeta, order=2)
        terms = (v.partial(2, 0), v.partial(1, 0) / rho, v.partial(0, 2))
        harm_w.push(abs(sum(terms)) / sum(abs(t) for t in terms), loc)

        h = harmonic.build_h(data, rho, zeta, order=2)
        scale = abs(h.partial(1, 0)) + abs(h.partial(0, 1))
        conj_w.push(abs(h.partial(1, 0) + rho * v.partial(0, 1)) / scale, loc)
        conj_w.push(abs(h.partial(0, 1) - rho * v.partial(1, 0)) / scale, loc)

        toda_w.push(abs(harmonic.toda_residual(data, rho, zeta)), loc)

        om = tod.fundamental_form(f, order=1).values()
        gi = np.linalg.inv(gv)
        norm_sq = float(np.einsum("ab,cd,ac,bd->", om, om, gi, gi))
        norm_w.push(abs(norm_sq - 4.0) / 4.0, loc)

        low = min(f.W.value, f.e2nu.value)
        if low < min_field:
            min_field = low
            positive.push(0.0, loc)

    checks = [
        _check("killing_det", det_w.value, tols["killing_det"], det_w.location),
        _check("harmonic_v", harm_w.value, tols["harmonic_v"], harm_w.location),
        _check("conjugate_pair", conj_w.value, tols["conjugate_pair"],
               conj_w.location),
        _check("toda", toda_w.value, tols["toda"], toda_w.location),
        _check("norm_identity", norm_w.value, tols["norm_identity"],
               norm_w.location),
        _check("positivity", min_field, 0.0, positive.location,
               good=min_field > 0.0),
    ]
    return checks


def suite_curvature(data, seed, tols):
    if data.n == 1:
        return [_skip(name, "degenerate single-nut data")
                for name in ("ricci_ratio", "weyl_spectrum", "lambda_z3",
                             "conformal_factor")]
    rng = np.random.default_rng(seed)
    points = sample_interior(data, 20, rng)
    c = float(data.c)
    ricci_w = _Worst()
    spec_w = _Worst()
    lam_w = _Worst()
    conf_w = _Worst()
    for rho, zeta in points:
        loc = _loc(rho, zeta)
        f = tod.tod_fields(data, rho, zeta, order=4)
        pack = curvature.curvature_pack(tod.tod_metric(f))
        norms = curvature.invariant_norms(pack)
        ricci_w.push(norms["ricci"] / norms["riemann"], loc)

        split = curvature.weyl_split(pack)
        lam = split.lam
        if lam is None:
            spec_w.push(math.inf, loc)
            continue
        want = np.sort(np.array([lam, -lam / 2, -lam / 2]))
        spec_w.push(np.max(np.abs(np.sort(split.eigs_plus) - want))
                    / abs(lam), loc)
        z = f.z.value
        lam_w.push(abs(lam * z ** 3 + 2 * c) / abs(2 * c), loc)

        omega = 1 / f.z.truncate(2)
        lap = curvature.scalar_laplacian(pack, omega)
        want_lap = -2 * c * omega.value ** 4
        conf_w.push(abs(lap - want_lap) / abs(want_lap), loc)

    return [
        _check("ricci_ratio", ricci_w.value, tols["ricci_ratio"],
               ricci_w.location),
        _check("weyl_spectrum", spec_w.value, tols["weyl_spectrum"],
               spec_w.location),
        _check("lambda_z3", lam_w.value, tols["lambda_z3"], lam_w.location),
        _check("conformal_factor", conf_w.value, tols["conformal_factor"],
               conf_w.location),
    ]


def suite_rods(data, seed, tols):
    checks = []
    try:
        reports = rods.gl2z_compatibility(data)
    except RodDataError as exc:
        checks.append(_check("gl2z", math.inf, tols["gl2z"], str(exc),
                             good=False))
    else:
        worst = _Worst()
        ok = True
        for rep in reports:
            loc = f"junction {rep.middle}"
            if rep.singular:
                worst.push(math.inf, loc + " (singular basis)")
                ok = False
                continue
            level = float(rep.level)
            sign = float(rep.sign)
            dev = max(abs(level - round(level)),
                      min(abs(sign - 1.0), abs(sign + 1.0)))
            worst.push(dev, loc)
            ok = ok and rep.ok
        checks.append(_check("gl2z", worst.value, tols["gl2z"],
                             worst.location, good=ok))

    worst = _Worst()
    for index in range(data.n + 1):
        rep = rods.conical_check(data, index)
        worst.push(abs(rep.limit - 1.0), f"rod {index}")
    checks.append(_check("conical", worst.value, tols["conical"],
                         worst.location))

    try:
        klass = rods.asymptotic_class(data)
    except RodDataError as exc:
        checks.append(_check("asymptotic_class", None, None, str(exc),
                             good=False))
    else:
        checks.append(_check("asymptotic_class", None, None, klass.label,
                             good=True))
    return checks


def suite_cky(data, seed, tols):
    rng = np.random.default_rng(seed)
    flat_w = _Worst()
    formula_w = _Worst()
    for _ in range(8):
        ang = float(rng.uniform(0.0, 2.0 * math.pi))
        params = FlatCkyParams(k1=math.cos(ang), k2=math.sin(ang))
        r = float(rng.uniform(0.4, 3.0))
        theta = float(rng.uniform(0.25, math.pi - 0.25))
        loc = f"r={r:.6g}, theta={theta:.6g}, k1={params.k1:.6g}"
        pack = curvature.curvature_pack(cky.flat_metric(r, theta))
        Z = cky.flat_cky(params, r, theta)
        residual, _ = curvature.cky_residual(pack, Z)
        flat_w.push(residual, loc)
        Zv = Z.values()
        norm_sq = float(np.einsum("ab,cd,ac,bd->", Zv, Zv,
                                  pack.ginv, pack.ginv))
        want = cky.flat_norm_squared(params, r, theta)
        formula_w.push(abs(norm_sq - want) / max(abs(want), 1.0), loc)
    checks = [
        _check("flat_family_residual", flat_w.value,
               tols["flat_family_residual"], flat_w.location),
        _check("flat_norm_formula", formula_w.value,
               tols["flat_norm_formula"], formula_w.location),
    ]

    if data.n == 1:
        checks.append(_skip("candidate_residual", "degenerate single-nut data"))
        checks.append(_skip("candidate_killing", "degenerate single-nut data"))
        checks.append(_skip("decay_exponent", "single-nut norm check only"))
        return checks

    cand_w = _Worst()
    kill_w = _Worst()
    for rho, zeta in sample_interior(data, 12, rng):
        loc = _loc(rho, zeta)
        f = tod.tod_fields(data, rho, zeta, order=3)
        pack = curvature.curvature_pack(tod.tod_metric(f))
        Z = cky.tod_cky_candidate(data, rho, zeta)
        residual, xi = curvature.cky_residual(pack, Z)
        cand_w.push(residual, loc)
        kill_w.push(max(float(np.max(np.abs(xi - np.array([1.0, 0, 0, 0])))),
                        curvature.killing_residual(pack, xi)), loc)
    checks.append(_check("candidate_residual", cand_w.value,
                         tols["candidate_residual"], cand_w.location))
    checks.append(_check("candidate_killing", kill_w.value,
                         tols["candidate_killing"], kill_w.location))

    kappa = sum(float(data.weights[i]) * float(data.weights[j])
                * (float(data.zs[j]) - float(data.zs[i])) ** 2
                for i in range(data.n) for j in range(i + 1, data.n))
    if abs(float(data.c) + kappa) > 1e-9 * kappa:
        checks.append(_skip("decay_exponent",
                            "needs c = -sum a_i a_j (z_j - z_i)^2 "
                            "(standard asymptotic cone)"))
        return checks
    report = cky.cky_decay_check(data, list(DECAY_RADII))
    if report["chart_limited"]:
        checks.append(_skip("decay_exponent",
                            "nonzero centered third moment: polar chart "
                            "is not the fast-rate chart"))
    else:
        checks.append(_check("decay_exponent",
                             abs(report["exponent"] + 2.0),
                             tols["decay_exponent"],
                             f"r in [{DECAY_RADII[0]:g}, {DECAY_RADII[-1]:g}]"))
    return checks


SUITES = {
    "fields": suite_fields,
    "curvature": suite_curvature,
    "rods": suite_rods,
    "cky": suite_cky,
}


# ---------------------------------------------------------------------------
# commands


def _parse_range(text, fallback):
    if text is None:
        return fallback
    parts = text.split(":")
    if len(parts) != 2:
        raise RodDataError(f"range must be lo:hi, got {text!r}")
    try:
        lo, hi = float(parts[0]), float(parts[1])
    except ValueError:
        raise RodDataError(f"range must hold numbers, got {text!r}")
    if not lo < hi:
        raise RodDataError(f"range must be increasing, got {text!r}")
    return lo, hi


def cmd_build(args):
    data, _ = load_rod_file(args.rod_file)
    try:
        nr, nz = (int(p) for p in args.grid.lower().split("x"))
    except ValueError:
        raise RodDataError(f"grid must be NxM, got {args.grid!r}")
    if nr < 1 or nz < 1:
        raise RodDataError("grid must be at least 1x1")
    scale = data.scale
    rho_lo, rho_hi = _parse_range(args.rho_range,
                                  (0.05 * scale, 2.0 * scale))
    zeta_lo, zeta_hi = _parse_range(
        args.zeta_range,
        (float(data.zs[0]) - 0.5 * scale, float(data.zs[-1]) + 0.5 * scale))
    c = float(data.c)
    lines = ["rho,zeta,W,F,e2nu,z,lambda"]
    for rho in np.linspace(rho_lo, rho_hi, nr):
        for zeta in np.linspace(zeta_lo, zeta_hi, nz):
            data.interior_check(rho, zeta)
            f = tod.tod_fields(data, float(rho), float(zeta), order=0)
            lam = -2.0 * c / f.z.value ** 3
            row = (rho, zeta, f.W.value, f.F.value, f.e2nu.value,
                   f.z.value, lam)
            lines.append(",".join(format(v, ".16e") for v in row))
    _emit("\n".join(lines) + "\n", args.out)
    return 0


def cmd_verify(args):
    data, input_hash = load_rod_file(args.rod_file)
    tols = dict(DEFAULT_TOLS)
    for override in args.tol:
        name, _, value = override.partition("=")
        if name not in tols or not value:
            raise RodDataError(f"unknown tolerance override {override!r}")
        try:
            tols[name] = float(value)
        except ValueError:
            raise RodDataError(f"tolerance must be a number, got {override!r}")
    names = list(SUITES) if args.suite == "all" else [args.suite]
    checks = []
    for name in names:
        checks.extend(SUITES[name](data, args.seed, tols))
    report = make_report(args.suite, checks, input_hash, args.seed)
    _emit(render_report(report), args.out)
    return 1 if report["status"] == "fail" else 0


def _branch_entry(branch):
    return {
        "n": branch.n,
        "pattern": _plain(branch.pattern),
        "status": branch.status,
        "junction": branch.junction,
        "certificate": branch.certificate,
        "details": _plain(branch.details),
    }


def cmd_classify(args):
    result = classify.search_admissible(n_max=args.nmax, l_bound=args.lmax,
                                        asymptotics=args.asymptotics)
    report = {
        "schema": SCHEMA,
        "command": "classify",
        "n_max": result.n_max,
        "l_bound": result.l_bound,
        "asymptotics": result.asymptotics,
        "admissible": [_branch_entry(b) for b in result.survivors],
        "branches": [_branch_entry(b) for b in result.branches],
        "summary": {"branches": len(result.branches),
                    "admissible": len(result.survivors)},
        "metadata": {"seed": None, "version": __version__},
    }
    _emit(render_report(report), args.out)
    return 0


def _pd_params(args):
    if getattr(args, "roots", None):
        roots = tuple(float(r) for r in args.roots)
    elif getattr(args, "case", None):
        if args.u is None or args.v is None:
            raise RodDataError("--case needs --u and --v")
        roots = pd.selfdual_roots(args.case, args.u, args.v)
    else:
        raise RodDataError("give --roots or --case with --u and --v")
    return pd.PdParams(roots=roots)


def cmd_pd_check(args):
    params = _pd_params(args)
    reg = pd.pd_regularity(params)
    verdict = "flat" if params.flat else (
        "selfdual" if params.selfdual else "generic")
    report = {
        "schema": SCHEMA,
        "command": "pd check",
        "roots": _plain(params.roots),
        "verdict": verdict,
        "regular": reg.ok,
        "eps": _plain(reg.eps),
        "epsbar": _plain(reg.epsbar),
        "m": _plain(reg.m),
        "n": _plain(reg.n),
        "m_raw": _plain(reg.m_raw),
        "n_raw": _plain(reg.n_raw),
        "collinear_12": reg.collinear_12,
        "collinear_34": reg.collinear_34,
        "metadata": {"seed": None, "version": __version__},
    }
    _emit(render_report(report), args.out)
    return 0


def cmd_pd_scan(args):
    result = pd.pd_scan(args.case, samples=args.samples, seed=args.seed)
    report = {
        "schema": SCHEMA,
        "command": "pd scan",
        "case": result.case,
        "samples": result.samples,
        "attempts": result.attempts,
        "admissible": result.admissible,
        "certificates": _plain(result.certificates),
        "metadata": {"seed": result.seed, "version": __version__},
    }
    _emit(render_report(report), args.out)
    return 1 if result.admissible else 0


def cmd_pd_selfdual(args):
    params = _pd_params(args)
    certificate = pd.pd_selfdual_check(params)
    report = {
        "schema": SCHEMA,
        "command": "pd selfdual",
        "roots": _plain(params.roots),
        "certificate": _plain(certificate),
        "metadata": {"seed": None, "version": __version__},
    }
    _emit(render_report(report), args.out)
    return 0


# ---------------------------------------------------------------------------
# argument plumbing


def build_parser():
    parser = argparse.ArgumentParser(
        prog="todkit",
        description="verification toolkit for toric half-flat instanton "
                    "metrics built from rod data")
    sub = parser.add_subparsers(dest="command", required=True)

    build = sub.add_parser("build", help="sample metric fields to CSV")
    build.add_argument("rod_file")
    build.add_argument("--grid", default="20x20", help="rho x zeta counts")
    build.add_argument("--rho-range", default=None, metavar="LO:HI")
    build.add_argument("--zeta-range", default=None, metavar="LO:HI")
    build.add_argument("--out", default="-")
    build.set_defaults(func=cmd_build)

    verify = sub.add_parser("verify", help="run invariant suites")
    verify.add_argument("rod_file")
    verify.add_argument("--suite", default="all",
                        choices=("fields", "curvature", "rods", "cky", "all"))
    verify.add_argument("--seed", type=int, default=0)
    verify.add_argument("--tol", action="append", default=[],
                        metavar="NAME=VALUE", help="override one tolerance")
    verify.add_argument("--out", default="-")
    verify.set_defaults(func=cmd_verify)

    cls = sub.add_parser("classify", help="admissible rod structure search")
    cls.add_argument("--nmax", type=int, default=4)
    cls.add_argument("--lmax", type=int, default=12)
    cls.add_argument("--asymptotics", default="ale", choices=("ale", "af"))
    cls.add_argument("--out", default="-")
    cls.set_defaults(func=cmd_classify)

    pdp = sub.add_parser("pd", help="quartic-root family checks")
    pdsub = pdp.add_subparsers(dest="pd_command", required=True)

    check = pdsub.add_parser("check", help="regularity of one root set")
    check.add_argument("--roots", nargs=4, type=float)
    check.add_argument("--case", choices=("a", "b"))
    check.add_argument("--u", type=float)
    check.add_argument("--v", type=float)
    check.add_argument("--out", default="-")
    check.set_defaults(func=cmd_pd_check)

    scan = pdsub.add_parser("scan", help="sampled non-regularity scan")
    scan.add_argument("--case", required=True,
                      choices=("i", "ii", "iii", "a", "b"))
    scan.add_argument("--samples", type=int, default=1000)
    scan.add_argument("--seed", type=int, default=7)
    scan.add_argument("--out", default="-")
    scan.set_defaults(func=cmd_pd_scan)

    sd = pdsub.add_parser("selfdual", help="palindromic root certificates")
    sd.add_argument("--roots", nargs=4, type=float)
    sd.add_argument("--case", choices=("a", "b"))
    sd.add_argument("--u", type=float)
    sd.add_argument("--v", type=float)
    sd.add_argument("--out", default="-")
    sd.set_defaults(func=cmd_pd_selfdual)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except RodDataError as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return 2
    except TodkitError as exc:
        print(f"evaluation error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
