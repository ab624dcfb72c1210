"""Batch command-line front end.

Subcommands::

    hypstab constants      per-dimension constants table (C_n pipeline)
    hypstab volume         hyperbolic simplex volume (file or regular ideal)
    hypstab triangulation  info | cycle | cover | dashboard on gluing data
    hypstab bounds         seifert | jsj | filling calculators

Every emitted number carries a provenance flag (exact | series |
monte-carlo | empirical-search | formula).  Identical configurations
(including --seed) produce byte-identical JSON.  The exit code is 0 only
when all requested checks pass: 1 for failed checks, 2 for bad input.

Triangulation targets are file paths in the wire format or built-in
fixture names (sphere, torus, klein, figure-eight/fig8,
boundary-4-simplex/s3).  Simplex files use Klein coordinates::

    { "dim": n, "vertices": [ {"x": [...], "ideal": false}, ... ] }

Cover specs assign a one-line permutation of {1..d} to each pairing
index::

    { "degree": d, "perms": { "0": [2, 1, ...], ... } }

The environment variable HYPSTAB_THREADS caps row-level parallelism of
the constants table (results are bit-identical at any thread count).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import bounds as bounds_mod
from . import complexes as cx
from .constants import constants_row, rows_to_csv, row_as_dict
from .fixtures import load_fixture, fixture_names, ALIASES, FIXTURE_WIRES
from .minkowski import DEFAULT_TOL, GeometryError, lift_klein
from .simplex import GeodesicSimplex
from .volume import DEFAULT_BUDGET, ideal_regular_volume, simplex_volume

FORMULA = "formula"

#: VolumeEstimate methods mapped onto the emitted provenance enum.
_FLAG_OF_METHOD = {"closed-form": "exact"}


def _flag(method: str) -> str:
    return _FLAG_OF_METHOD.get(method, method)


def _fail(msg: str) -> SystemExit:
    print(f"error: {msg}", file=sys.stderr)
    return SystemExit(2)


@dataclass
class RunConfig:
    command: str
    seed: int = 0
    samples: int = DEFAULT_BUDGET
    tolerance: float = DEFAULT_TOL
    fmt: str = "text"
    out: str | None = None

    def __post_init__(self):
        if self.samples < 1000:
            raise SystemExit("--samples must be at least 1000")


def _emit(cfg: RunConfig, text: str):
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        print(text)


def _json_dump(payload) -> str:
    return json.dumps(payload, sort_keys=True, indent=2)


def _load_json(path: str):
    try:
        with open(path) as fh:
            return json.load(fh)
    except FileNotFoundError:
        raise _fail(f"no such file: {path}")
    except json.JSONDecodeError as exc:
        raise _fail(f"parse error in {path} at line {exc.lineno} "
                    f"column {exc.colno}: {exc.msg}")


def _load_triangulation(target: str) -> cx.Triangulation:
    if target in FIXTURE_WIRES or target in ALIASES:
        return load_fixture(target)
    data = _load_json(target)
    try:
        return cx.from_wire(data, name=os.path.basename(target))
    except cx.ComplexError as exc:
        raise _fail(str(exc))


def _load_simplex(path: str, tol: float) -> GeodesicSimplex:
    data = _load_json(path)
    try:
        dim = int(data["dim"])
        verts = [lift_klein(np.asarray(rec["x"], dtype=float),
                            ideal=bool(rec.get("ideal", False)), tol=tol)
                 for rec in data["vertices"]]
    except (KeyError, TypeError) as exc:
        raise _fail(f"malformed simplex file {path}: {exc}")
    except GeometryError as exc:
        raise _fail(f"invalid vertex in {path}: {exc}")
    return GeodesicSimplex(tuple(verts), dim)


# ---------------------------------------------------------------------------
# constants


def cmd_constants(cfg: RunConfig, args) -> int:
    if not (4 <= args.n_min <= args.n_max <= 8):
        raise SystemExit("need 4 <= n-min <= n-max <= 8")
    dims = list(range(args.n_min, args.n_max + 1))
    threads = max(1, int(os.environ.get("HYPSTAB_THREADS", "1")))

    def job(n):
        try:
            row, _ = constants_row(
                n, budget=cfg.samples, seed=cfg.seed, restarts=args.restarts,
                bisection_depth=args.depth, climb_iters=args.climb_iters)
            return n, row, None
        except Exception as exc:  # row-level failure; other rows still emitted
            return n, None, str(exc)

    with ThreadPoolExecutor(max_workers=threads) as pool:
        results = list(pool.map(job, dims))
    results.sort(key=lambda r: r[0])
    rows = [row for _, row, _ in results if row is not None]
    errors = {n: err for n, _, err in results if err is not None}

    if cfg.fmt == "json":
        payload = {"rows": [row_as_dict(r) for r in rows],
                   "errors": {str(n): e for n, e in errors.items()},
                   "seed": cfg.seed, "samples": cfg.samples}
        _emit(cfg, _json_dump(payload))
    elif cfg.fmt == "csv":
        text = rows_to_csv(rows)
        if errors:
            text += "".join(f"# error n={n}: {e}\n" for n, e in errors.items())
        _emit(cfg, text)
    else:
        lines = [f"{'n':>2} {'v_n':>12} {'+-':>9} {'alpha_n':>10} {'k':>2} "
                 f"{'delta_n':>10} {'eta_n':>12} {'a_n':>10} {'eps_n':>12} {'C_n':>18} flags"]
        for r in rows:
            lines.append(
                f"{r.n:>2} {r.v_n.value:>12.8f} {r.v_n.std_error:>9.1e} "
                f"{r.alpha_n:>10.7f} {r.k_n:>2} {r.delta_n:>10.7f} {r.eta_n:>12.5e} "
                f"{r.a_n:>10.7f} {r.eps_n:>12.5e} {r.C_n:>18.12f} "
                f"[v:{r.flags['v_n']} rest:{r.flags['eps_n']}]")
        for n, e in errors.items():
            lines.append(f"{n:>2} ERROR: {e}")
        _emit(cfg, "\n".join(lines))
    if errors or any(not r.C_n < 1.0 for r in rows):
        return 1
    return 0


# ---------------------------------------------------------------------------
# volume


def cmd_volume(cfg: RunConfig, args) -> int:
    if (args.regular_ideal is None) == (args.simplex is None):
        raise SystemExit("give exactly one of --regular-ideal N or a simplex file")
    try:
        if args.regular_ideal is not None:
            est = ideal_regular_volume(args.regular_ideal, budget=cfg.samples,
                                       seed=cfg.seed)
            label = f"regular ideal {args.regular_ideal}-simplex"
        else:
            K = _load_simplex(args.simplex, cfg.tolerance)
            est = simplex_volume(K, budget=cfg.samples, seed=cfg.seed)
            label = args.simplex
    except GeometryError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    payload = {"input": label, "volume": {"value": est.value, "flag": _flag(est.method)},
               "std_error": est.std_error, "samples": est.samples,
               "seed": cfg.seed}
    if cfg.fmt == "json":
        _emit(cfg, _json_dump(payload))
    else:
        _emit(cfg, f"{label}: vol = {est.value:.9f} +- {est.std_error:.2e} "
                   f"[{_flag(est.method)}, {est.samples} samples, seed {cfg.seed}]")
    return 0


# ---------------------------------------------------------------------------
# triangulation


def _links_payload(T):
    rep = cx.links(T)
    return {
        "vertex_links": [{"faces": v.faces, "euler": v.euler} for v in rep.vertex_links],
        "edge_valences": [e.valence for e in rep.edges],
    }


def cmd_triangulation(cfg: RunConfig, args) -> int:
    T = _load_triangulation(args.target)
    name = (T.labels or {}).get("name", args.target)
    report = cx.validate(T)

    if args.action == "info":
        counts = cx.cell_counts(T)
        orient = cx.orientability(T)
        payload = {
            "name": name, "dim": T.dim, "simplices": T.simplex_count,
            "valid": report.valid, "closed": report.closed,
            "f_vector": list(counts.f_vector), "euler": counts.euler,
            "orientable": orient.orientable,
        }
        if T.dim == 3 and report.closed:
            payload["links"] = _links_payload(T)
        if cfg.fmt == "json":
            _emit(cfg, _json_dump(payload))
        else:
            lines = [f"{name}: dim {T.dim}, {T.simplex_count} simplices, "
                     f"{'closed' if report.closed else 'bounded'}, "
                     f"{'orientable' if orient.orientable else 'nonorientable'}",
                     f"  f-vector {counts.f_vector}, chi = {counts.euler}"]
            if "links" in payload:
                for i, v in enumerate(payload["links"]["vertex_links"]):
                    lines.append(f"  vertex {i}: link chi = {v['euler']} ({v['faces']} faces)")
                lines.append(f"  edge valences: {payload['links']['edge_valences']}")
            _emit(cfg, "\n".join(lines))
        return 0 if report.valid else 1

    if args.action == "cycle":
        if not report.closed:
            print("error: fundamental cycle needs a closed complex", file=sys.stderr)
            return 1
        try:
            z = cx.fundamental_cycle(T)
        except cx.ComplexError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        ok = cx.verify_cycle(T, z)
        l1 = z.l1()
        if cfg.fmt == "json":
            _emit(cfg, _json_dump({"name": name, "cycle_verified": ok,
                                   "l1": {"value": str(l1), "flag": "exact"},
                                   "simplices": T.simplex_count}))
        else:
            _emit(cfg, f"{name}: cycle {'verified' if ok else 'FAILED'}, "
                       f"L1 = {l1} (exact), t = {T.simplex_count}")
        return 0 if ok else 1

    if args.action == "cover":
        if args.characteristic is not None:
            spec = cx.characteristic_cover_spec(T, args.characteristic)
        elif args.spec is not None:
            spec = cx.cover_spec_from_wire(_load_json(args.spec))
        else:
            raise SystemExit("cover needs --spec FILE or --characteristic X")
        try:
            cover = cx.build_cover(T, spec)
        except cx.ComplexError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 1
        counts = cx.cell_counts(cover)
        payload = {"name": name, "degree": spec.degree,
                   "cover_simplices": cover.simplex_count,
                   "f_vector": list(counts.f_vector), "euler": counts.euler,
                   "wire": cx.to_wire(cover)}
        if cfg.fmt == "json":
            _emit(cfg, _json_dump(payload))
        else:
            _emit(cfg, f"{name}: degree-{spec.degree} cover with "
                       f"{cover.simplex_count} simplices, f {counts.f_vector}, "
                       f"chi = {counts.euler}")
        return 0

    if args.action == "dashboard":
        dash = cx.inequality_dashboard(T)
        payload = {
            "name": dash.name, "dim": dash.dim,
            "simplices": {"value": dash.simplices, "flag": "exact"},
            "f_vector": list(dash.f_vector), "euler": dash.euler,
            "euler_bound": dash.euler_bound, "euler_bound_ok": dash.euler_bound_ok,
            "orientable": dash.orientable,
            "cycle_l1": None if dash.cycle_l1 is None else str(dash.cycle_l1),
            "cycle_ok": dash.cycle_ok,
            "annotations": list(dash.annotations),
        }
        if cfg.fmt == "json":
            _emit(cfg, _json_dump(payload))
        else:
            lines = [f"{dash.name}: t = {dash.simplices} (upper bound for the "
                     f"Delta-complexity), chi = {dash.euler}",
                     f"  |chi| <= 2^(n+1) t = {dash.euler_bound}: "
                     f"{'ok' if dash.euler_bound_ok else 'VIOLATED'}"]
            if dash.cycle_l1 is not None:
                lines.append(f"  alternated cycle: L1 = {dash.cycle_l1} <= t, "
                             f"boundary {'vanishes' if dash.cycle_ok else 'NONZERO'}")
            lines += [f"  note: {a}" for a in dash.annotations]
            _emit(cfg, "\n".join(lines))
        ok = dash.euler_bound_ok and dash.cycle_ok is not False
        return 0 if ok else 1

    raise SystemExit(f"unknown action {args.action}")


# ---------------------------------------------------------------------------
# bounds


def _parse_int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x]
    except ValueError:
        raise SystemExit(f"expected a comma-separated integer list, got {text!r}")


def cmd_bounds(cfg: RunConfig, args) -> int:
    try:
        if args.calculator == "seifert":
            degs = _parse_int_list(args.d)
            seq = bounds_mod.seifert_bound(args.e, args.chi, degs)
            rows = [{"d": d, "bound": cb.bound,
                     "normalized": {"value": cb.normalized, "flag": FORMULA}}
                    for d, cb in zip(degs, seq)]
            payload = {"calculator": "seifert", "e": args.e, "chi": args.chi,
                       "rows": rows, "limit": {"value": 0, "flag": FORMULA},
                       "decreasing": all(seq[i].normalized >= seq[i + 1].normalized
                                         for i in range(len(seq) - 1))}
            text = "\n".join([f"seifert e={args.e} chi={args.chi}"] +
                             [f"  fiber-unwrap degree d^2={cb.degree}: bound {cb.bound}, "
                              f"normalized {float(cb.normalized):.6g} [formula]"
                              for cb in seq] + ["  limit -> 0"])
        elif args.calculator == "jsj":
            sweep = _parse_int_list(args.n)
            seq = [bounds_mod.jsj_cover_bound(args.va, args.vb, args.vc, args.vd,
                                              getattr(args, "h"), n) for n in sweep]
            rows = [{"n": n, "degree": cb.degree, "bound": cb.bound,
                     "normalized": {"value": cb.normalized, "flag": FORMULA}}
                    for n, cb in zip(sweep, seq)]
            payload = {"calculator": "jsj", "rows": rows,
                       "limit": {"value": seq[0].limit, "flag": FORMULA}}
            text = "\n".join([f"jsj v_A={args.va} v_B={args.vb} v_C={args.vc} "
                              f"v_D={args.vd} h={args.h}"] +
                             [f"  n={n}: degree {cb.degree}, bound {cb.bound}, "
                              f"normalized {float(cb.normalized):.6g} [formula]"
                              for n, cb in zip(sweep, seq)] +
                             [f"  limit -> v_A = {seq[0].limit}"])
        else:  # filling
            if args.figure_eight:
                preset = bounds_mod.FIGURE_EIGHT_FILLING
                va, vb, vd = preset["v_a"], preset["v_b"], preset["v_d"]
            else:
                va, vb, vd = args.va, args.vb, args.vd
            sweep = _parse_int_list(args.n)
            seq = [bounds_mod.filling_bound(va, vb, vd, n) for n in sweep]
            rows = [{"n": n, "degree": cb.degree, "bound": cb.bound,
                     "normalized": {"value": cb.normalized, "flag": FORMULA}}
                    for n, cb in zip(sweep, seq)]
            payload = {"calculator": "filling", "v_a": va, "v_b": vb, "v_d": vd,
                       "rows": rows, "limit": {"value": seq[0].limit, "flag": FORMULA}}
            label = " (figure-eight preset: v_A = c(N) = 2)" if args.figure_eight else ""
            text = "\n".join([f"filling v_A={va} v_B={vb} v_D={vd}{label}"] +
                             [f"  n={n}: degree {cb.degree}, bound {cb.bound}, "
                              f"normalized {float(cb.normalized):.6g} [formula]"
                              for n, cb in zip(sweep, seq)] +
                             [f"  limit -> v_A = {seq[0].limit}"])
    except bounds_mod.BoundsError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    _emit(cfg, _json_dump(payload) if cfg.fmt == "json" else text)
    return 0


# ---------------------------------------------------------------------------
# parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0,
                        help="random seed (default 0; identical seeds give identical output)")
    common.add_argument("--samples", type=lambda s: int(float(s)), default=DEFAULT_BUDGET,
                        help="Monte Carlo sample budget (default 2e6, min 1e3)")
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOL,
                        help="validation tolerance for geometric inputs")
    common.add_argument("--format", dest="fmt", choices=("text", "json", "csv"),
                        default="text")
    common.add_argument("--out", default=None, help="write output to a file")

    ap = argparse.ArgumentParser(prog="hypstab", description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    c = sub.add_parser("constants", parents=[common],
                       help="per-dimension constants table (4 <= n <= 8)")
    c.add_argument("--n-min", type=int, default=4)
    c.add_argument("--n-max", type=int, default=5)
    c.add_argument("--restarts", type=int, default=64,
                   help="optimizer restarts in the eps search")
    c.add_argument("--depth", type=int, default=20, help="bisection step budget")
    c.add_argument("--climb-iters", type=int, default=12)
    c.set_defaults(func=cmd_constants)

    v = sub.add_parser("volume", parents=[common],
                       help="volume of a geodesic simplex")
    v.add_argument("simplex", nargs="?", default=None,
                   help="simplex file in Klein coordinates")
    v.add_argument("--regular-ideal", type=int, default=None, metavar="N",
                   help="use the regular ideal N-simplex")
    v.set_defaults(func=cmd_volume)

    t = sub.add_parser("triangulation", parents=[common],
                       help="operations on face-pairing gluing data")
    t.add_argument("action", choices=("info", "cycle", "cover", "dashboard"))
    t.add_argument("target", help="wire-format file or fixture name "
                                  f"({', '.join(fixture_names())})")
    t.add_argument("--spec", default=None, help="cover-spec JSON file")
    t.add_argument("--characteristic", type=int, default=None, metavar="X",
                   help="use the x-characteristic cover of a torus complex")
    t.set_defaults(func=cmd_triangulation)

    b = sub.add_parser("bounds", parents=[common],
                       help="covering-degree bound calculators")
    b.add_argument("calculator", choices=("seifert", "jsj", "filling"))
    b.add_argument("--e", type=int, default=0, help="Euler number (seifert)")
    b.add_argument("--chi", type=int, default=-2, help="chi of the base surface (seifert)")
    b.add_argument("--d", default="1,10,100,1000", help="degree list (seifert)")
    b.add_argument("--va", type=int, default=0)
    b.add_argument("--vb", type=int, default=0)
    b.add_argument("--vc", type=int, default=0)
    b.add_argument("--vd", type=int, default=0)
    b.add_argument("--h", type=int, default=1)
    b.add_argument("--n", default="1,10,100,1000", help="characteristic parameter sweep")
    b.add_argument("--figure-eight", action="store_true",
                   help="use the figure-eight filling preset (v_A = c(N) = 2)")
    b.set_defaults(func=cmd_bounds)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(command=args.command, seed=args.seed, samples=args.samples,
                    tolerance=args.tolerance, fmt=args.fmt, out=args.out)
    return args.func(cfg, args)


if __name__ == "__main__":
    sys.exit(main())
