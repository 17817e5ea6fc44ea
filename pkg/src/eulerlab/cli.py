"""
Command-line entry point: ``eulerlab <subcommand> [options]``.

Subcommands: catalog, solve, verify, barrier, kernel, transform.
Fields are written as CSV and reports as JSON lines, all numbers with 17
significant digits.  Exit status: 0 success, 1 a check failed, 2 usage or
I/O error.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from .operator import GridFunction, HalfPlaneRect, write_csv

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2
FILE_SUFFIXES = (".csv", ".jsonl", ".json")


class UsageError(Exception):
    pass


def _fmt(v):
    return format(float(v), ".17g")


def _grid(s, default):
    if s is None:
        return default
    try:
        nx, ny = (int(t) for t in s.split(","))
    except ValueError:
        raise UsageError(f"--grid expects NX,NY, got {s!r}") from None
    if nx < 3 or ny < 3:
        raise UsageError("--grid needs NX, NY >= 3")
    return nx, ny


def _out_path(args, default_name):
    """``--out`` is a file when it ends in a data suffix, else a directory."""
    out = args.out or "."
    if out.endswith(FILE_SUFFIXES):
        parent = os.path.dirname(out)
    else:
        parent, out = out, os.path.join(out, default_name)
    if parent:
        try:
            os.makedirs(parent, exist_ok=True)
        except OSError as exc:
            raise OSError(f"cannot create output directory {parent!r}: {exc.strerror}") from None
    return out


def _write_jsonl(path, records):
    with open(path, "w") as fh:
        for r in records:
            fh.write(json.dumps(r, sort_keys=True, allow_nan=False) + "\n")


def _summary(kind, path, **info):
    extra = " ".join(f"{k}={v}" for k, v in info.items())
    print(f"{kind}: {path} {extra}".rstrip())


# ---------------------------------------------------------------------------
# subcommands

def cmd_catalog(args):
    from .catalog import catalog_entries, check_entry, get_entry
    if args.list:
        for e in catalog_entries():
            tags = ",".join(e.violates) or "-"
            print(f"{e.name:18s} {e.kind:14s} violates={tags:32s} {e.coeffs.name}")
        return EXIT_OK
    if args.sample:
        e = get_entry(args.sample)
        x0, x1, _, y1 = e.box
        nx, ny = _grid(args.grid, (61, 61))
        gf = e.grid_function(HalfPlaneRect(x0, x1, y1, nx, ny))
        path = _out_path(args, f"{e.name}.csv")
        gf.to_csv(path)
        _summary("field", path, nodes=nx * ny)
        return EXIT_OK
    names = [e.name for e in catalog_entries()] if args.check in (None, "all") else [args.check]
    records, ok = [], True
    for name in names:
        r = check_entry(name)
        good = r["classified"] and all(v["confirmed"] for v in r["violations"].values())
        ok &= good
        r["ok"] = good
        records.append(_jsonable(r))
    path = _out_path(args, "catalog_report.jsonl")
    _write_jsonl(path, records)
    _summary("report", path, entries=len(records), failures=sum(not r["ok"] for r in records))
    return EXIT_OK if ok else EXIT_FAIL


def _jsonable(v):
    from .verify import _clean
    return _clean(v)


def cmd_solve(args):
    from .solver import SolverError, load_problem, solve
    if not args.problem:
        raise UsageError("solve needs --problem FILE.yaml")
    try:
        prob = load_problem(args.problem)
    except FileNotFoundError:
        raise OSError(f"problem file not found: {args.problem!r}") from None
    dom = prob.domain
    if args.grid:
        nx, ny = _grid(args.grid, None)
        dom = HalfPlaneRect(dom.x_min, dom.x_max, dom.y_max, nx, ny, dom.y_min)
    kw = {"tol": args.tol} if args.tol else {}
    try:
        rep = solve(prob.coeffs, dom, prob.bc, **kw)
    except SolverError as exc:
        print(f"solve failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    path = _out_path(args, "solution.csv")
    rep.solution.to_csv(path)
    base = path[:-4] if path.endswith(".csv") else path
    rpath = base + "_report.csv"
    d = rep.to_dict()
    write_csv(rpath, list(d), [[v if isinstance(v, str) else _fmt(v) for v in d.values()]])
    _summary("field", path, nodes=dom.nx * dom.ny)
    _summary("report", rpath, residual=_fmt(rep.linear_residual), closure=rep.closure_rule_used)
    return EXIT_OK


def cmd_verify(args):
    from .verify import DEFAULT_SEED, run_suite
    seed = DEFAULT_SEED if args.seed is None else args.seed
    reports = run_suite(args.suite, seed)
    path = _out_path(args, f"verify_{args.suite}.jsonl")
    with open(path, "w") as fh:
        for r in reports:
            fh.write(r.to_json() + "\n")
    bad = [r for r in reports if not r.consistent]
    _summary("report", path, checks=len(reports), inconsistent=len(bad))
    for r in bad:
        print(f"  inconsistent: {r.label or r.theorem_tag} passed={r.passed} "
              f"expected={r.expect_pass} margin={_fmt(r.margin)}", file=sys.stderr)
    return EXIT_OK if not bad else EXIT_FAIL


def cmd_barrier(args):
    from .barriers import BARRIER_NAMES, make_barrier
    if args.name not in BARRIER_NAMES:
        raise UsageError(f"unknown barrier {args.name!r}; choose from {', '.join(BARRIER_NAMES)}")
    b = make_barrier(args.name, y0=args.y0, Lambda=args.Lambda, lam=args.lam, y_d=args.y_d)
    x0, x1, y0, y1 = b.box
    nx, ny = _grid(args.grid, (81, 41))
    if nx % 2 == 0:
        raise UsageError("barrier grids need odd NX so that x = 0 is a node")
    xs = np.linspace(x0, x1, nx)
    ys = np.linspace(y0, y1, ny)
    X, Y = np.meshgrid(xs, ys, indexing="ij")
    V = np.asarray(b(X, Y), float)
    path = _out_path(args, f"{args.name}.csv")
    write_csv(path, ["x", "y", "value"], np.column_stack([X.ravel(), Y.ravel(), V.ravel()]))
    _summary("field", path, nodes=nx * ny, certifies=b.certifies)
    if args.check:
        chk = b.sign_check(tol=args.tol or 1e-8)
        print(f"sign_check: passed={chk['passed']} worst={_fmt(chk['worst'])}")
        return EXIT_OK if chk["passed"] else EXIT_FAIL
    return EXIT_OK


def cmd_kernel(args):
    from .kernel import BOUNDARY_PRESETS, KernelDivergenceError, convolve_boundary, make_kernel
    if args.f0 not in BOUNDARY_PRESETS:
        raise UsageError(f"unknown f0 {args.f0!r}; choose from {', '.join(BOUNDARY_PRESETS)}")
    spec = make_kernel(args.b1, args.b2)
    nx, ny = _grid(args.grid, (41, 21))
    dom = HalfPlaneRect(-args.x_half, args.x_half, args.y_max, nx, ny)
    X, Y = dom.mesh()
    f0 = BOUNDARY_PRESETS[args.f0]
    try:
        vals = np.empty(X.shape)
        vals[:, 0] = f0(dom.x)
        pts = np.column_stack([X[:, 1:].ravel(), Y[:, 1:].ravel()])
        vals[:, 1:] = convolve_boundary(spec, f0, pts).reshape(nx, ny - 1)
    except KernelDivergenceError as exc:
        print(f"kernel: {exc}", file=sys.stderr)
        return EXIT_FAIL
    gf = GridFunction(dom, vals, limit_row=True)
    path = _out_path(args, f"kernel_{args.f0}.csv")
    gf.to_csv(path)
    _summary("field", path, nodes=nx * ny, mass=_fmt(spec.mass_at(1.0)))
    return EXIT_OK


def cmd_transform(args):
    from .transforms import TRANSFORM_PRESETS, consistency_check
    if args.name not in TRANSFORM_PRESETS:
        raise UsageError(f"unknown transform {args.name!r}; choose from "
                         f"{', '.join(TRANSFORM_PRESETS)}")
    params = {k: v for k, v in (("k", args.k), ("b1", args.b1), ("beta", args.beta),
                                ("nu", args.nu)) if v is not None}
    if args.points:
        try:
            pts = np.array([[float(v) for v in p.split(",")] for p in args.points.split(";")])
        except ValueError:
            raise UsageError("--points expects 'x,y;x,y;...'") from None
        res = TRANSFORM_PRESETS[args.name](**params)
        b1, b2, c, _ = res.coeffs.evaluate(pts[:, 0], pts[:, 1])
        P = res.prefactor(pts[:, 0], pts[:, 1])
        path = _out_path(args, f"transform_{args.name}_coeffs.csv")
        write_csv(path, ["x", "y", "b1", "b2", "c", "prefactor"],
                  np.column_stack([pts, b1 + 0 * P, b2 + 0 * P, c + 0 * P, P]))
        _summary("coefficients", path, points=len(pts))
        return EXIT_OK
    seed = 0 if args.seed is None else args.seed
    r = consistency_check(args.name, n=args.n, seed=seed, **params)
    tol = args.tol or 1e-6
    path = _out_path(args, f"transform_{args.name}.csv")
    probes = [k for k in r if k not in ("max", "x", "y")]
    write_csv(path, ["probe", "max_rel_error"], [[p, r[p]] for p in probes])
    _summary("report", path, max_rel=_fmt(r["max"]), tol=_fmt(tol))
    return EXIT_OK if r["max"] <= tol else EXIT_FAIL


# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--out", help="output file (.csv/.jsonl) or directory (default .)")
    common.add_argument("--seed", type=int, help="random seed (64-bit integer)")
    common.add_argument("--grid", help="grid size NX,NY")
    common.add_argument("--tol", type=float, help="tolerance override")

    p = argparse.ArgumentParser(prog="eulerlab",
                                description="Euler-type degenerate elliptic operators: "
                                            "catalog, solver, verification, barriers, kernels, "
                                            "transforms.")
    sub = p.add_subparsers(dest="command", metavar="{catalog,solve,verify,barrier,kernel,transform}")
    sub.required = True

    s = sub.add_parser("catalog", parents=[common], help="list, check or sample catalog entries")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--list", action="store_true", help="print the entries")
    g.add_argument("--check", nargs="?", const="all", help="check one entry or all (default)")
    g.add_argument("--sample", metavar="NAME", help="write an entry sampled on a grid")
    s.set_defaults(func=cmd_catalog)

    s = sub.add_parser("solve", parents=[common], help="solve a YAML problem file")
    s.add_argument("--problem", help="YAML problem file")
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("verify", parents=[common], help="run a verification suite")
    s.add_argument("--suite", default="all",
                   help="harnack, max_principle, gradient, monotonicity, unspecifiability, "
                        "poly_x, continuity, counterexamples or all")
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("barrier", parents=[common], help="sample a barrier function")
    s.add_argument("--name", required=True)
    s.add_argument("--y0", type=float, default=1.0)
    s.add_argument("--lambda", dest="Lambda", type=float, default=2.0)
    s.add_argument("--lam", type=float, default=2.0, help="power/λ parameter")
    s.add_argument("--y-d", dest="y_d", type=float, default=1.0)
    s.add_argument("--check", action="store_true", help="also run the sign check")
    s.set_defaults(func=cmd_barrier)

    s = sub.add_parser("kernel", parents=[common], help="reconstruct f from boundary data")
    s.add_argument("--b1", type=float, default=0.0)
    s.add_argument("--b2", type=float, default=0.5)
    s.add_argument("--f0", default="cos", help="cos, one, bump, gauss or step")
    s.add_argument("--x-half", dest="x_half", type=float, default=4.0)
    s.add_argument("--y-max", dest="y_max", type=float, default=2.0)
    s.set_defaults(func=cmd_kernel)

    s = sub.add_parser("transform", parents=[common], help="pull-back consistency of a transform")
    s.add_argument("--name", required=True, help="keldysh, population, heston or sabr")
    s.add_argument("--k", type=float)
    s.add_argument("--b1", type=float)
    s.add_argument("--beta", type=float)
    s.add_argument("--nu", type=float)
    s.add_argument("--n", type=int, default=50, help="number of probe points")
    s.add_argument("--points", help="write coefficients at 'x,y;x,y;...' instead")
    s.set_defaults(func=cmd_transform)
    return p


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"eulerlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"eulerlab {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main(argv=None):
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
