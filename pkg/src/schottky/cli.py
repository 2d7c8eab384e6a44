"""Command line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 numerical
non-convergence, 3 at least one failed check.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import __version__, checks
from .config import load_config
from .core import SiegelPoint
from .exceptions import NumericalError, SchottkyError, ValidationError

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_FAILED = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def to_jsonable(obj):
    """Complex numbers become [re, im]; arrays become nested lists."""
    if isinstance(obj, (complex, np.complexfloating)):
        return [float(obj.real), float(obj.imag)]
    if isinstance(obj, np.ndarray):
        return [to_jsonable(x) for x in obj.tolist()] if obj.ndim else to_jsonable(obj.item())
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.floating,)):
        return float(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(x) for x in obj]
    if isinstance(obj, SiegelPoint):
        return to_jsonable(obj.Z)
    return obj


def parse_complex(text: str) -> complex:
    t = text.strip().replace(" ", "").replace("I", "i")
    if "j" not in t:
        t = t.replace("i", "j")
    if t in ("j", "+j"):
        return 1j
    if t == "-j":
        return -1j
    if t.endswith("j") and t[:-1] and t[-2] in "+-":
        t = t[:-1] + "1j"
    try:
        return complex(t)
    except ValueError as exc:
        raise ValidationError(f"cannot parse complex number {text!r}") from exc


def parse_vector(text: str) -> np.ndarray:
    return np.array([parse_complex(x) for x in text.split(",") if x.strip()], dtype=complex)


def parse_matrix(text: str) -> np.ndarray:
    """Rows separated by ';', entries by ','.  A single number gives a 1x1 matrix."""
    rows = [parse_vector(r) for r in text.split(";") if r.strip()]
    if len({len(r) for r in rows}) != 1:
        raise ValidationError("matrix rows have different lengths")
    return np.array(rows)


def report(command: str, cfg, records, extra=None) -> dict:
    out = {
        "command": command,
        "version": __version__,
        "config": cfg.to_dict(),
        "records": [{"name": r.name, "tag": r.tag, "passed": r.passed, "metrics": r.metrics,
                     "runtime_s": r.runtime, "runtime_limit_s": r.runtime_limit, "error": r.error,
                     "details": r.details} for r in records],
        "passed": all(r.passed for r in records),
    }
    if extra:
        out.update(extra)
    return to_jsonable(out)


def csv_summary(records) -> str:
    buf = io.StringIO()
    w = csv.writer(buf)
    w.writerow(["name", "tag", "passed", "metric", "measured", "threshold", "runtime_s"])
    for r in records:
        for m in r.metrics or [{"label": r.error or "", "measured": "", "threshold": ""}]:
            w.writerow([r.name, r.tag, r.passed, m["label"], m["measured"], m["threshold"], f"{r.runtime:.3f}"])
    return buf.getvalue()


def _emit(data, out_path=None):
    text = json.dumps(to_jsonable(data), indent=2)
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _config(args):
    overrides = {}
    if getattr(args, "seeds", None) is not None:
        overrides["seeds"] = list(range(1, args.seeds + 1))
    if getattr(args, "threads", None) is not None:
        overrides["threads"] = args.threads
    return load_config(getattr(args, "config", None), **overrides)


def cmd_theta_eval(args):
    from .theta import HalfCharacteristic, theta_jet

    Z = SiegelPoint(parse_matrix(args.Z))
    g = args.g or Z.g
    if Z.g != g:
        raise ValidationError(f"--Z has genus {Z.g}, --g says {g}")
    z = parse_vector(args.z) if args.z else np.zeros(g, dtype=complex)
    if z.size == 1 and g > 1:
        z = np.full(g, z[0])
    ch = HalfCharacteristic.parse(args.char, g)
    jet = theta_jet(ch, z, Z, args.eps)
    _emit({"char": str(ch), "value": jet.value, "grad_z": jet.grad_z, "hess_z": jet.hess_z,
           "err_bound": jet.err_bound, "abs_sum": jet.abs_sum, "radius": jet.radius, "n_terms": jet.n_terms})
    return EXIT_OK


VERIFY_GROUPS = {
    "all": list(checks.CHECKS),
    "klein": ["projection", "klein"],
    "modularity": ["modularity"],
    "lattice-identity": ["lattice"],
}


def cmd_verify(args):
    cfg = _config(args)
    session = checks.Session(cfg)
    t0 = time.perf_counter()
    records = []
    for name in VERIFY_GROUPS[args.what]:
        if name == "klein" and len(cfg.seeds) < 3:
            rec = checks.CheckRecord(name, checks.TAGS[name], error="precondition: the Klein survey needs >= 3 seeds")
        else:
            rec = checks.run_check(name, session)
        records.append(rec)
        print(rec.summary(), file=sys.stderr)
    data = report(f"verify {args.what}", cfg, records, {"wall_clock_s": time.perf_counter() - t0})
    _emit(data, args.out)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(csv_summary(records))
    return EXIT_OK if data["passed"] else EXIT_FAILED


def cmd_locus_project(args):
    from .core import random_siegel_point
    from .locus import project_to_schottky

    cfg = _config(args)
    tau0 = random_siegel_point(args.seed, 4, *cfg.im_range)
    lp = project_to_schottky(tau0, args.tol, args.max_iter, seed=args.seed)
    _emit({"seed": args.seed, "tau": lp.tau, "residual": lp.residual, "iterations": lp.iterations,
           "log": lp.log, "passed": lp.residual <= cfg.locus_tol})
    return EXIT_OK


def cmd_locus_singular(args):
    from .forms import s4_matrix
    from .locus import find_theta_singularity, project_seed, sigma_matrix, verify_proportionality

    cfg = _config(args)
    lp = project_seed(args.seed, im_range=tuple(cfg.im_range))
    sp = find_theta_singularity(lp.tau, tol=cfg.singular_tol)
    rep = verify_proportionality(s4_matrix(lp.tau), sigma_matrix(sp.e, lp.tau))
    _emit({"seed": args.seed, "e": sp.e, "residual": sp.residual, "solutions": [e for e, _ in sp.solutions],
           "proportionality_residual": rep.residual, "lambda": rep.lam, "passed": rep.passed})
    return EXIT_OK


def cmd_hyperelliptic_tau(args):
    from . import hyperelliptic as hyp

    if args.file:
        with open(args.file) as fh:
            pts = json.load(fh)
        pts = pts["branch_points"] if isinstance(pts, dict) else pts
    elif args.branch_points:
        pts = [float(x) for x in args.branch_points.split(",")]
    else:
        raise ValidationError("give --branch-points or --file")
    res = hyp.period_matrix(hyp.HyperellipticCurve(pts))
    out = {"branch_points": pts, "tau": res.tau, "quad_order": res.quad_order,
           "symmetry_defect": res.symmetry_defect}
    if res.tau.g == 1:
        lam = hyp.modular_lambda(res.tau)
        cr = hyp.cross_ratio(*pts)
        out["lambda"] = lam
        out["cross_ratio"] = cr
        out["lambda_residual"] = abs(lam - cr) / abs(cr)
    if res.tau.g == 4:
        from .forms import snapshot

        snap = snapshot(res.tau)
        out["F4_residual"] = snap.residual
        try:
            out["vanishing_even_thetanulls"] = hyp.vanishing_thetanulls(res.tau)[0]
        except SchottkyError as exc:
            out["vanishing_even_thetanulls"] = str(exc)
    _emit(out)
    return EXIT_OK


def cmd_bench_theta(args):
    from .core import random_siegel_point
    from .theta import enumerate_characteristics, theta_jet, thetanulls

    rows = []
    for g in args.g:
        for eps in args.eps:
            Z = random_siegel_point(0, g)
            ch = enumerate_characteristics(g, "even")[-1]
            t0 = time.perf_counter()
            for _ in range(args.repeats):
                jet = theta_jet(ch, np.zeros(g), Z, eps)
            dt = time.perf_counter() - t0
            t0 = time.perf_counter()
            thetanulls(Z, eps=eps, hessians=True)
            dn = time.perf_counter() - t0
            rows.append({"g": g, "eps": eps, "terms": jet.n_terms, "evals_per_s": args.repeats / dt,
                         "all_even_thetanulls_with_hessians_s": dn})
    w = csv.DictWriter(sys.stdout, fieldnames=list(rows[0]))
    w.writeheader()
    w.writerows(rows)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="schottky", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="group", required=True, parser_class=_Parser)

    th = sub.add_parser("theta").add_subparsers(dest="action", required=True, parser_class=_Parser)
    ev = th.add_parser("eval", help="evaluate one theta function with its z-derivatives")
    ev.add_argument("--g", type=int)
    ev.add_argument("--char", required=True, help="bits a1..ag,b1..bg, e.g. 0,0")
    ev.add_argument("--z", default="")
    ev.add_argument("--Z", required=True, help="rows separated by ';', e.g. 'i' or '1.1i,0.2;0.2,1.3i'")
    ev.add_argument("--eps", type=float, default=1e-13)
    ev.set_defaults(func=cmd_theta_eval)

    ver = sub.add_parser("verify")
    ver.add_argument("what", choices=list(VERIFY_GROUPS))
    ver.add_argument("--seeds", type=int)
    ver.add_argument("--threads", type=int)
    ver.add_argument("--config")
    ver.add_argument("--out")
    ver.add_argument("--csv")
    ver.set_defaults(func=cmd_verify)

    lo = sub.add_parser("locus").add_subparsers(dest="action", required=True, parser_class=_Parser)
    pr = lo.add_parser("project")
    pr.add_argument("--seed", type=int, default=1)
    pr.add_argument("--tol", type=float, default=1e-14)
    pr.add_argument("--max-iter", type=int, default=25)
    pr.add_argument("--config")
    pr.set_defaults(func=cmd_locus_project)
    sg = lo.add_parser("singular")
    sg.add_argument("--seed", type=int, default=1)
    sg.add_argument("--config")
    sg.set_defaults(func=cmd_locus_singular)

    hy = sub.add_parser("hyperelliptic").add_subparsers(dest="action", required=True, parser_class=_Parser)
    ta = hy.add_parser("tau")
    ta.add_argument("--branch-points")
    ta.add_argument("--file")
    ta.set_defaults(func=cmd_hyperelliptic_tau)

    be = sub.add_parser("bench").add_subparsers(dest="action", required=True, parser_class=_Parser)
    bt = be.add_parser("theta")
    bt.add_argument("--g", type=int, nargs="+", default=[1, 2, 3, 4])
    bt.add_argument("--eps", type=float, nargs="+", default=[1e-8, 1e-13])
    bt.add_argument("--repeats", type=int, default=20)
    bt.set_defaults(func=cmd_bench_theta)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_CONFIG
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except SchottkyError as exc:
        print(f"failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_FAILED


if __name__ == "__main__":
    sys.exit(main())
