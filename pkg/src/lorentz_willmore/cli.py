"""Command-line front end ``lw``.

Exit codes: 0 pass, 1 usage error, 2 verification failed, 3 numeric degeneracy.
Every command prints a JSON report on stdout; files named by ``--json``,
``--csv`` or ``--obj`` are written atomically once the command has finished.
"""
from __future__ import annotations

import argparse
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import gaussbonnet as gb
from . import gluing, io, kernels, patches
from .catalog import CATALOG, catalog_table
from .elastica import (ElasticaProfile, Family, HalfPlaneModel, ModelKind, el_residual,
                       excluded_domain, generating_curve, integrate_frenet, pole_free_window,
                       standard_start, total_squared_curvature)
from .elliptic import PoleError
from .expr import ExprError
from .surface import (PRESETS, DegenerateSurface, axis_kind_for, generate_surface, preset,
                      residual_max, willmore_energy)

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_DEGENERATE = 0, 1, 2, 3

MODELS = {
    "ads-a1": ModelKind.ADS_A1,
    "desitter-r": ModelKind.DESITTER_R,
    "hyperbolic-q": ModelKind.HYPERBOLIC_Q,
    "ads-a3": ModelKind.ADS_A3,
}
FAMILIES = {"geodesic": Family.GEODESIC, "cn": Family.CN, "constant": Family.CONSTANT}
PATCHES = {
    "flat-plane": patches.flat_plane,
    "hyperboloid": patches.hyperboloid,
    "saddle": patches.saddle,
    "two-sheet": patches.two_sheet_hyperboloid,
    "rindler": patches.rindler_plane,
    "cylinder": patches.cylinder,
}
PATCH_CENTERS = {
    "flat-plane": (0.0, 0.0), "hyperboloid": (0.7, 0.5), "saddle": (0.3, 0.05),
    "two-sheet": (0.8, 0.5), "rindler": (1.0, 0.5), "cylinder": (0.0, 1.0),
}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def threads() -> int:
    """Worker cap from LW_THREADS (default: CPU count)."""
    raw = os.environ.get("LW_THREADS")
    if raw is None:
        return os.cpu_count() or 1
    try:
        n = int(raw)
    except ValueError:
        raise UsageError(f"LW_THREADS must be an integer, got {raw!r}") from None
    if n < 1:
        raise UsageError("LW_THREADS must be at least 1")
    return n


def _positive(text):
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {text}")
    return v


def _sign(text):
    v = int(text)
    if v not in (1, -1):
        raise argparse.ArgumentTypeError("sign must be 1 or -1")
    return v


# ----- config file --------------------------------------------------------------

def read_config(path) -> dict:
    """``key = value`` lines; ``#`` starts a comment; keys use flag spelling."""
    out = {}
    with open(path, encoding="utf-8") as fh:
        for n, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"{path}:{n}: expected key=value")
            k, v = (x.strip() for x in line.split("=", 1))
            out[k.lstrip("-").replace("-", "_")] = v
    return out


def _apply_config(sub: argparse.ArgumentParser, cfg: dict) -> None:
    """Turn config entries into parser defaults so explicit flags still win."""
    actions = {a.dest: a for a in sub._actions}
    defaults = {}
    for key, raw in cfg.items():
        a = actions.get(key)
        if a is None:
            raise UsageError(f"unknown config key {key!r}")
        if isinstance(a, (argparse._StoreTrueAction, argparse._StoreFalseAction)):
            if raw.lower() not in ("1", "0", "true", "false", "yes", "no"):
                raise UsageError(f"config key {key!r} needs a boolean")
            defaults[key] = raw.lower() in ("1", "true", "yes")
            continue
        conv = a.type or str
        try:
            if a.nargs in (2, "+", "*"):
                vals = [conv(x) for x in raw.replace(",", " ").split()]
                if a.nargs == 2 and len(vals) != 2:
                    raise ValueError("expected two values")
                defaults[key] = vals
            else:
                defaults[key] = conv(raw)
        except (ValueError, argparse.ArgumentTypeError) as exc:
            raise UsageError(f"config key {key!r}: {exc}") from None
        if a.choices is not None and defaults[key] not in a.choices:
            raise UsageError(f"config key {key!r}: {raw!r} not in {sorted(a.choices)}")
    sub.set_defaults(**defaults)


# ----- commands -----------------------------------------------------------------

def _profile_from(args) -> ElasticaProfile:
    model = HalfPlaneModel(MODELS[args.model], args.sign_half)
    if args.eps1 is None:
        eps1 = model.det_sign * args.eps2 if args.eps2 is not None else 1
    else:
        eps1 = args.eps1
    eps2 = args.eps2 if args.eps2 is not None else model.det_sign * eps1
    G = model.metric_curvature if args.curvature == "metric" else None
    try:
        return ElasticaProfile(FAMILIES[args.family], args.C, args.a0, eps1, eps2, model, G)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def cmd_elastica(args, outputs):
    prof = _profile_from(args)
    window = tuple(args.window) if args.window else pole_free_window(prof, default=args.half_width)
    if not window[1] > window[0]:
        raise UsageError("window must be non-degenerate")
    excl = excluded_domain(prof, window) if prof.family is Family.CN else None
    poles = list(excl.poles) if excl else []
    report = {
        "profile": {"family": args.family, "C": prof.C, "a0": prof.a0, "eps1": prof.eps1,
                    "eps2": prof.eps2, "model": prof.model.kind.value, "gauss_curvature": prof.G,
                    "lambda2": prof.lam2 if prof.family is Family.CN else None,
                    "modulus": prof.modulus if prof.family is Family.CN else None},
        "window": list(window),
        "excluded": poles,
    }
    if poles and not args.allow_poles:
        report["error"] = "pole inside the window; pass --allow-poles to continue"
        return report, EXIT_FAIL
    s = np.linspace(window[0], window[1], args.samples)
    keep = np.ones(s.shape, bool)
    for p in poles:
        keep &= np.abs(s - p) > args.pole_margin
    res = np.abs(el_residual(prof, s[keep]))
    rmax = float(np.max(res)) if res.size else 0.0
    report["residual"] = {"max": rmax, "mean": float(np.mean(res)) if res.size else 0.0,
                          "samples": int(keep.sum()), "skipped_near_poles": int((~keep).sum())}
    if not poles:
        lo, hi = min(window[0], prof.a0), max(window[1], prof.a0)
        pos, tan = standard_start(prof.model, prof.eps1)
        curve = integrate_frenet(prof.model, prof, pos, tan, (lo, hi), args.step, prof.eps1,
                                 start_s=prof.a0)
        m = (curve.s >= window[0] - 1e-12) & (curve.s <= window[1] + 1e-12)
        for name in ("s", "pos", "tan", "kappa"):
            setattr(curve, name, getattr(curve, name)[m])
        report["curve"] = {"samples": len(curve.s), "terminated_early": curve.terminated_early,
                           "unit_speed_defect": curve.unit_speed_defect(),
                           "total_squared_curvature": total_squared_curvature(curve)
                           if len(curve.s) > 1 else 0.0}
        if args.csv:
            outputs[args.csv] = io.profile_csv(curve)
    report["tolerance"] = args.tol
    report["passed"] = rmax < args.tol
    return report, EXIT_OK if rmax < args.tol else EXIT_FAIL


def _surface_from(args):
    if args.preset:
        kw = {"r": args.r, "A": args.A, "ns": args.ns, "nt": args.nt}
        if args.s_range:
            kw["s_range"] = tuple(args.s_range)
        if args.t_range:
            kw["t_range"] = tuple(args.t_range)
        return preset(args.preset, **kw)
    prof = _profile_from(args)
    if args.s_range:
        lo, hi = args.s_range
        pos, tan = standard_start(prof.model, prof.eps1)
        curve = integrate_frenet(prof.model, prof, pos, tan, (min(lo, prof.a0), max(hi, prof.a0)),
                                 (hi - lo) / (args.ns - 1), prof.eps1, start_s=prof.a0)
    else:
        # clipped away from poles and trimmed to the resolvable band
        curve = generating_curve(prof)
    t = np.linspace(*(args.t_range or (0.0, 1.0)), args.nt)
    return generate_surface(axis_kind_for(prof.model.kind), curve, t)


def cmd_surface(args, outputs):
    if args.preset is None and args.family is None:
        raise UsageError("give --preset or an elastica --family")
    if args.family is None:
        args.family = "cn"
    surf = _surface_from(args)
    energy = willmore_energy(surf)
    rmax = energy.residual_field_max
    verdict = "SOLUTION" if rmax < args.tol else "NOT-SOLUTION"
    report = {"surface": args.preset or "elastica", "axis": surf.kind.value,
              "causal": "Lorentzian" if surf.causal_sign > 0 else "Riemannian",
              "energy": energy, "gauss_identity_max": float(np.nanmax(np.abs(surf.gauss_identity_defect()))),
              "tolerance": args.tol, "verdict": verdict}
    if args.obj:
        outputs[args.obj] = io.surface_obj({report["surface"]: surf.X})
    return report, EXIT_OK if verdict == "SOLUTION" else EXIT_FAIL


def _callable(text):
    seed = gluing.seed_from_expression(text, delta=1.0)
    return seed.phi


def cmd_glue(args, outputs):
    if args.phi is not None:
        seed = gluing.seed_from_expression(args.phi, args.delta)
        check = gluing.check_local_gluing(seed.f_alpha, seed.f_beta, args.order, args.tol)
        report = {"seed": seed.label, "delta": seed.delta, "gluing": check}
        if not args.check_only:
            glued = gluing.build_glued_surface(seed, ns=args.ns)
            report["classification"] = gluing.classify_glued_solution(glued, args.fit_tol)
            report["light_like_patch"] = {"point": list(glued.patch.point),
                                          "included": list(glued.patch.included_pieces)}
            if args.obj:
                outputs[args.obj] = io.surface_obj({k: s.X for k, s in glued.surfaces.items()})
    else:
        if args.falpha is None or args.fbeta is None:
            raise UsageError("give --phi, or both --falpha and --fbeta")
        check = gluing.check_local_gluing(_callable(args.falpha), _callable(args.fbeta),
                                          args.order, args.tol)
        report = {"f_alpha": args.falpha, "f_beta": args.fbeta, "gluing": check}
    return report, EXIT_OK if check.passed else EXIT_FAIL


def _parse_vertices(text):
    try:
        V = [tuple(float(c) for c in p.split(",")) for p in text.split(";") if p.strip()]
    except ValueError:
        raise UsageError(f"bad vertex list {text!r}") from None
    if len(V) < 3 or any(len(v) != 2 for v in V):
        raise UsageError("need at least three 'u,v' vertices separated by ';'")
    return V


def cmd_gaussbonnet(args, outputs):
    patch = PATCHES[args.patch]()
    if args.vertices:
        polys = [gb.polygon(patch, _parse_vertices(args.vertices))]
    else:
        rng = np.random.default_rng(args.seed)
        center = tuple(args.center) if args.center else PATCH_CENTERS[args.patch]
        polys = [gb.random_polygon(patch, rng, center, args.radius) for _ in range(args.random)]

    def run(poly):
        return gb.gauss_bonnet_residual(poly, h=args.h)

    with ThreadPoolExecutor(max_workers=threads()) as pool:
        reps = list(pool.map(run, polys))
    worst = max(abs(r.residual) for r in reps)
    report = {"patch": args.patch, "polygons": [
        {"vertices": [list(map(float, v)) for v in p.vertices], **r.as_dict()}
        for p, r in zip(polys, reps)], "max_abs_residual": worst, "tolerance": args.tol,
        "passed": worst < args.tol}
    return report, EXIT_OK if worst < args.tol else EXIT_FAIL


def cmd_catalog(args, outputs):
    rows = catalog_table()
    return {"rows": rows, "count": len(rows)}, EXIT_OK


# ----- verify-all ---------------------------------------------------------------

def _check_elliptic():
    from .elliptic import complete_K, ellipj
    rng = np.random.default_rng(7)
    u = rng.uniform(-10, 10, 2000)
    worst = 0.0
    for m in rng.uniform(0, 1, 20):
        sn, cn, dn = ellipj(u, m)
        worst = max(worst, float(np.max(np.abs(sn ** 2 + cn ** 2 - 1))),
                    float(np.max(np.abs(dn ** 2 + m * sn ** 2 - 1))))
    worst = max(worst, abs(complete_K(0.0) - math.pi / 2))
    return worst < 1e-10, worst


def _check_el():
    worst = 0.0
    for row in CATALOG:
        for C in (0.5, 1.0, 1.7, 3.0):
            try:
                prof = row.profile(C)
            except ValueError:
                continue
            lo, hi = pole_free_window(prof)
            worst = max(worst, float(np.max(np.abs(el_residual(prof, np.linspace(lo, hi, 50))))))
    return worst < 1e-6, worst


def _check_discrimination():
    sol = max(residual_max(preset("hyperboloid")), residual_max(preset("plane")))
    non = min(residual_max(preset("cylinder")), residual_max(preset("saddle")))
    return sol < 1e-4 and non > 0.1, sol


def _check_gluing():
    hyp = gluing.build_glued_surface(gluing.seed_from_expression("sqrt(1+u)", 0.9))
    X = hyp.vertices()
    err = float(np.max(np.abs(X[:, 0] ** 2 + X[:, 1] ** 2 - X[:, 2] ** 2 - 1)))
    sad = gluing.seed_from_expression("-u")
    ok = gluing.check_local_gluing(sad.f_alpha, sad.f_beta, 3, 1e-8).passed
    return err < 1e-12 and ok, err


def _check_gauss_bonnet():
    rng = np.random.default_rng(3)
    worst = 0.0
    for name in ("flat-plane", "hyperboloid"):
        patch = PATCHES[name]()
        for _ in range(10):
            poly = gb.random_polygon(patch, rng, PATCH_CENTERS[name], 0.25)
            worst = max(worst, abs(gb.gauss_bonnet_residual(poly).residual))
    return worst < 1e-3, worst


def _check_geodesics():
    model = HalfPlaneModel(ModelKind.HYPERBOLIC_Q)
    ray = integrate_frenet(model, 0.0, (0.0, 1.0), (0.0, 1.0), (-1.0, 1.0), start_s=0.0)
    arc = integrate_frenet(model, 0.0, (0.0, 1.0), (1.0, 0.0), (-1.0, 1.0), start_s=0.0)
    dev = max(float(np.max(np.abs(ray.pos[:, 0]))),
              float(np.max(np.abs(np.sum(arc.pos ** 2, axis=1) - 1.0))))
    return dev < 1e-6, dev


VERIFY = {
    "elliptic-identities": _check_elliptic,
    "euler-lagrange": _check_el,
    "solution-discrimination": _check_discrimination,
    "gluing": _check_gluing,
    "gauss-bonnet": _check_gauss_bonnet,
    "geodesic-catalog": _check_geodesics,
}


def cmd_verify_all(args, outputs):
    def run(item):
        name, fn = item
        t0 = time.perf_counter()
        ok, value = fn()
        return name, {"passed": bool(ok), "value": value, "seconds": time.perf_counter() - t0}

    with ThreadPoolExecutor(max_workers=threads()) as pool:
        results = dict(pool.map(run, VERIFY.items()))
    passed = all(r["passed"] for r in results.values())
    for r in results.values():
        r.pop("seconds")  # keep the report deterministic
    return {"backend": kernels.BACKEND, "checks": results, "passed": passed}, \
        EXIT_OK if passed else EXIT_FAIL


# ----- parser -------------------------------------------------------------------

def _add_profile_args(p, family_default="cn"):
    p.add_argument("--family", choices=sorted(FAMILIES), default=family_default)
    p.add_argument("--C", type=float, default=1.0)
    p.add_argument("--a0", type=float, default=0.0)
    p.add_argument("--eps1", type=_sign, default=None)
    p.add_argument("--eps2", type=_sign, default=None)
    p.add_argument("--model", choices=sorted(MODELS), default="ads-a1")
    p.add_argument("--sign-half", type=_sign, default=1)
    p.add_argument("--curvature", choices=("stated", "metric"), default="stated",
                   help="curvature used in the elastica equation")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="lw", description=__doc__.splitlines()[0])
    parser.add_argument("--config", help="key=value file; explicit flags win")
    parser.add_argument("--json", help="also write the JSON report to this path")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("elastica", help="free elastica profile, EL residual and curve")
    _add_profile_args(p)
    p.add_argument("--window", type=float, nargs=2)
    p.add_argument("--half-width", type=_positive, default=5.0)
    p.add_argument("--samples", type=int, default=50)
    p.add_argument("--step", type=_positive, default=1e-3)
    p.add_argument("--tol", type=_positive, default=1e-6)
    p.add_argument("--allow-poles", action="store_true")
    p.add_argument("--pole-margin", type=_positive, default=1e-2)
    p.add_argument("--csv")
    p.set_defaults(func=cmd_elastica)

    p = sub.add_parser("surface", help="rotational surface energies and Willmore verdict")
    p.add_argument("--preset", choices=PRESETS)
    _add_profile_args(p, family_default=None)
    p.add_argument("--r", type=_positive, default=1.0)
    p.add_argument("--A", type=float, default=1.0)
    p.add_argument("--ns", type=int, default=401)
    p.add_argument("--nt", type=int, default=33)
    p.add_argument("--s-range", type=float, nargs=2)
    p.add_argument("--t-range", type=float, nargs=2)
    p.add_argument("--tol", type=_positive, default=1e-4)
    p.add_argument("--obj")
    p.set_defaults(func=cmd_surface)

    p = sub.add_parser("glue", help="glue surfaces across the light cone of an axis point")
    p.add_argument("--phi", help="seed phi(u), e.g. 'sqrt(1+u)'")
    p.add_argument("--delta", type=_positive)
    p.add_argument("--falpha", help="profile f_alpha as an expression in u")
    p.add_argument("--fbeta", help="profile f_beta as an expression in u")
    p.add_argument("--check-only", action="store_true")
    p.add_argument("--order", type=int, default=3)
    p.add_argument("--tol", type=_positive, default=1e-8)
    p.add_argument("--fit-tol", type=_positive, default=1e-6)
    p.add_argument("--ns", type=int, default=201)
    p.add_argument("--obj")
    p.set_defaults(func=cmd_glue)

    p = sub.add_parser("gaussbonnet", help="Gauss-Bonnet residuals of non-null polygons")
    p.add_argument("--patch", choices=sorted(PATCHES), default="hyperboloid")
    p.add_argument("--vertices", help="'u,v;u,v;...' in parameter space")
    p.add_argument("--random", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--center", type=float, nargs=2)
    p.add_argument("--radius", type=_positive, default=0.25)
    p.add_argument("--h", type=_positive, default=1e-2)
    p.add_argument("--tol", type=_positive, default=1e-3)
    p.set_defaults(func=cmd_gaussbonnet)

    p = sub.add_parser("catalog", help="rotationally invariant solutions by symmetry group")
    p.set_defaults(func=cmd_catalog)

    p = sub.add_parser("verify-all", help="quick run of the verification suite")
    p.set_defaults(func=cmd_verify_all)
    return parser


# Flags whose values are expressions and may start with a minus sign.
_EXPRESSION_FLAGS = ("--phi", "--falpha", "--fbeta")


def _join_expression_values(argv):
    out, i = [], 0
    while i < len(argv):
        if argv[i] in _EXPRESSION_FLAGS and i + 1 < len(argv):
            out.append(f"{argv[i]}={argv[i + 1]}")
            i += 2
        else:
            out.append(argv[i])
            i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _join_expression_values(list(sys.argv[1:] if argv is None else argv))
    try:
        pre, _ = parser.parse_known_args(argv)
        if pre.config:
            sub = parser._subparsers._group_actions[0].choices[pre.command]
            _apply_config(sub, read_config(pre.config))
        args = parser.parse_args(argv)
        outputs = {}
        report, code = args.func(args, outputs)
    except SystemExit as exc:
        return int(exc.code or 0)
    except (UsageError, ExprError, OSError) as exc:
        print(f"lw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (PoleError, DegenerateSurface, gb.NullVectorError, patches.DegenerateMetric,
            FloatingPointError, np.linalg.LinAlgError) as exc:
        print(f"lw: numeric degeneracy: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except (gluing.GluingError, ValueError) as exc:
        print(f"lw: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    text = io.dumps({"command": args.command, "exit_code": code, **report})
    if args.json:
        outputs[args.json] = text
    for path, content in outputs.items():
        io.write_atomic(path, content)
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
