"""Command-line front end.

Exit codes:
  0  success
  1  a verification ran and failed
  2  usage error (unknown subcommand, bad flag)
  3  invalid parameter file
  4  a cap was exhausted before a fixpoint was reached
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import numpy as np

from .algebra import FieldError, NumberField, ParseError
from .model import ModelError, build_model, digit_set, expand, load_params

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
EXIT_PARAMS = 3
EXIT_CAP = 4

MAX_GRID = 1024
BUNDLED = ("threefold", "fivefold", "sevenfold", "four", "nonergode")


class CapExhausted(RuntimeError):
    pass


def config_path(name):
    """Path of a parameter file; bare names refer to the bundled examples."""
    p = Path(name)
    if p.exists():
        return p
    stem = name[:-5] if name.endswith(".json") else name
    if stem in BUNDLED:
        return Path(str(resources.files("rotbeta") / "configs" / f"{stem}.json"))
    raise ModelError(f"no parameter file {name!r}")


def _load(args):
    if not args.params:
        raise ModelError("--params is required for this subcommand")
    return load_params(config_path(args.params))


def _enc(v):
    if isinstance(v, dict):
        return {str(k): _enc(x) for k, x in v.items()}
    if isinstance(v, (list, tuple)):
        return [_enc(x) for x in v]
    if isinstance(v, (bool, int, float, str)) or v is None:
        return v
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    return str(v)


def _write(out, name, text):
    path = out / name
    path.write_text(text)
    return str(path)


def _dump(out, name, obj):
    return _write(out, name, json.dumps(_enc(obj), indent=1, sort_keys=True) + "\n")


def _closure(params, cap):
    from .discontinuity import segment_orbit_closure

    kw = {} if cap is None else {"cap": cap}
    res = segment_orbit_closure(params, **kw)
    if res.status != "finite":
        raise CapExhausted(f"segment closure exceeded the cap after {res.depth} rounds")
    return res


# ---------------------------------------------------------------------------
# rendering


def heatmap_svg(grid, size=512):
    """Grey-scale cell map of a ``k x k`` array indexed ``[x, y]``."""
    grid = np.asarray(grid, dtype=float)
    k = grid.shape[0]
    if k > MAX_GRID:
        raise ValueError(f"grid {k} exceeds {MAX_GRID}")
    top = grid.max() if grid.size and grid.max() > 0 else 1.0
    c = size / k
    lines = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}">',
             f'<rect width="{size}" height="{size}" fill="white"/>']
    for i in range(k):
        for j in range(k):
            v = grid[i, j]
            if v <= 0:
                continue
            g = int(round(230 * (1 - v / top)))
            lines.append(f'<rect x="{i * c:.3f}" y="{(k - 1 - j) * c:.3f}" width="{c:.3f}" '
                         f'height="{c:.3f}" fill="rgb({g},{g},{g})"/>')
    lines.append(f'<rect width="{size}" height="{size}" fill="none" stroke="black"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def cmd_expand(args, out):
    params = _load(args)
    rng = np.random.default_rng(args.seed)
    pts = rng.integers(0, 1000, size=(args.points, 2))
    rows = []
    for x, y in pts:
        p = (f"{x}/1000", f"{y}/1000")
        ds = expand((params.K.coerce(Fraction(p[0])), params.K.coerce(Fraction(p[1]))), args.length, params,
                    mode=args.mode)
        rows.append({"point": list(p), "digits": [[d.k1, d.k2] for d in ds],
                     "labels": "".join(d.label or "?" for d in ds)})
    files = [_dump(out, "expand.json", {"alphabet": [[d.k1, d.k2, d.label] for d in digit_set(params)],
                                        "expansions": rows})]
    return {"points": len(rows), "files": files}


def cmd_bounds(args, out):
    from .bounds import ergodic_bounds

    params = _load(args)
    rep = ergodic_bounds(params).summary()
    files = [_dump(out, "bounds.json", rep)]
    return {"B1": rep["B1"], "B2": rep["B2"], "beta_gt_B1": rep["beta_gt_B1"],
            "beta_gt_B2": rep["beta_gt_B2"], "nu1": rep["nu1"], "nu2": rep["nu2"], "files": files}


def cmd_sofic(args, out):
    from .discontinuity import intercept_closure

    params = _load(args)
    cert = intercept_closure(params, cap=args.cap or 10**6)
    if cert.status == "exhausted":
        raise CapExhausted("intercept closure exceeded the cap")
    res = _closure(params, args.cap)
    files = [_dump(out, "certificate.json", cert.to_json()),
             _dump(out, "segments.json", {"status": res.status, "depth": res.depth,
                                          "segments": [[[str(c) for c in s.p], [str(c) for c in s.q]]
                                                       for s in res.segments]})]
    return {"intercepts": cert.count, "certificate": cert.status, "segments": len(res.segments),
            "depth": res.depth, "files": files}


def cmd_partition(args, out):
    from .partition import build_arrangement, euler_count, faces_to_json, render_svg

    params = _load(args)
    res = _closure(params, args.cap)
    arr = build_arrangement(res.segments + res.boundary)
    files = [_dump(out, "faces.json", faces_to_json(arr)),
             _write(out, "partition.svg", render_svg(arr, size=args.size, labels=True))]
    return {"segments": len(res.segments), "faces": len(arr.faces), "V": arr.V, "E": arr.E,
            "euler_faces": euler_count(arr), "files": files}


def cmd_graph(args, out):
    from .partition import build_arrangement
    from .sofic import analyze, build_graph, to_csv, to_dot, to_json

    params = _load(args)
    res = _closure(params, args.cap)
    arr = build_arrangement(res.segments + res.boundary)
    graph = build_graph(params, arr)
    # readable labels when the parameter file names the digits
    names = {str(d): d.label for d in digit_set(params) if d.label}
    if names:
        graph.edges = [(j, names.get(d, d), k) for j, d, k in graph.edges]
        graph.labels = [names.get(x, x) for x in graph.labels]
    info = analyze(graph, params.beta)
    files = [_write(out, "graph.json", to_json(graph)),
             _write(out, "transitions.csv", to_csv(graph)),
             _write(out, "graph.dot", to_dot(graph)),
             _dump(out, "analysis.json", info)]
    return {"states": info["states"], "edges": info["edges"], "primitive": info["primitive"],
            "sft": info["sft"], "density_residual": info["density_residual"], "files": files}


def cmd_simulate(args, out):
    from .simulate import detect_components, run_ensemble, ulam_density

    params = _load(args)
    if args.grid > MAX_GRID:
        raise ValueError(f"grid {args.grid} exceeds {MAX_GRID}")
    ens = run_ensemble(params, seeds=args.seeds, burn_in=args.burn_in, n=args.steps,
                       rng_seed=args.seed, grid=args.grid)
    comp = detect_components(ens)
    files = [_dump(out, "components.json", comp.to_json())]
    for k, g in enumerate(comp.grids):
        files.append(_write(out, f"component_{k + 1}.svg", heatmap_svg(g.astype(float))))
    occ = ens.occupancy.sum(axis=0).reshape(args.grid, args.grid)
    files.append(_write(out, "occupancy.svg", heatmap_svg(occ)))
    result = {"components": comp.count, "inconclusive": comp.inconclusive, "files": files}
    if args.ulam:
        dens, lam, resid = ulam_density(params, k=args.ulam)
        files.append(_write(out, "ulam.svg", heatmap_svg(dens)))
        result.update(ulam_eigenvalue=lam, ulam_residual=resid)
    return result


def cmd_nonsofic(args, out):
    from .algebra import parse_element
    from .discontinuity import nonsofic_growth_check, nonsofic_witness

    K = NumberField([1, -1, -1], name="omega", approx=1.618)
    beta = parse_element(args.beta, K)
    rational = beta.is_rational()
    if rational:
        cert = nonsofic_witness(beta.to_fraction())
    else:
        cert = nonsofic_witness(beta, K=K, omega=K.gen)
    result = {"beta": args.beta, "status": cert.status, "lhs": cert.data["lhs_float"],
              "rhs": cert.data["rhs_float"], "lhs_exact": str(cert.data["lhs"]),
              "rhs_exact": str(cert.data["rhs"]), "reasons": cert.data["reasons"]}
    if rational and args.growth:
        params = build_model(K, 5, args.beta, "1", "zeta", xi="0", trace="omega - 1")
        mins, ok = nonsofic_growth_check(params, steps=args.growth)
        result["growth_minima"] = [float(m) for m in mins]
        result["growth_ok"] = all(ok)
    result["files"] = [_dump(out, "nonsofic.json", {**cert.to_json(), **result})]
    return result


def cmd_nonergode(args, out):
    from .simulate import nonergode_model, nonergodic_region_check, verify_set_equation

    rep = verify_set_equation(args.beta, args.eta1)
    inside, lo, hi = nonergodic_region_check(args.beta, args.eta1)
    result = {"set_equation": rep.get("set_equation"), "ok": rep["ok"], "region": inside,
              "lower": float(lo), "upper": float(hi), "problems": rep["problems"]}
    if args.seeds:
        from .simulate import detect_components, run_ensemble

        params = nonergode_model(args.beta, args.eta1)
        ens = run_ensemble(params, seeds=args.seeds, burn_in=args.burn_in, n=args.steps,
                           rng_seed=args.seed, grid=args.grid)
        comp = detect_components(ens)
        result["components"] = comp.count
        for k, g in enumerate(comp.grids):
            _write(out, f"component_{k + 1}.svg", heatmap_svg(g.astype(float)))
    result["files"] = [_dump(out, "nonergode.json", {**rep, **result})]
    result["_failed"] = not (rep["ok"] and inside)
    return result


COMMANDS = {
    "expand": cmd_expand,
    "bounds": cmd_bounds,
    "sofic": cmd_sofic,
    "partition": cmd_partition,
    "graph": cmd_graph,
    "simulate": cmd_simulate,
    "nonsofic": cmd_nonsofic,
    "nonergode": cmd_nonergode,
}


def make_parser():
    ap = argparse.ArgumentParser(prog="rotbeta", description="Rotational beta transformations.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--params", help="parameter file or bundled example name")
    common.add_argument("--out", default=".", help="output directory")
    common.add_argument("--eps", type=float, default=1e-30, help="interval precision")
    common.add_argument("--cap", type=int, default=None, help="state/segment cap")
    common.add_argument("--seed", type=int, default=0, help="RNG seed")
    common.add_argument("--grid", type=int, default=64, help="grid resolution")
    common.add_argument("--mode", choices=("exact", "float"), default="exact")
    common.add_argument("--size", type=int, default=800, help="SVG size in pixels")
    sub = ap.add_subparsers(dest="command", required=True)
    p = sub.add_parser("expand", parents=[common], help="digit expansions of random rational points")
    p.add_argument("--points", type=int, default=10)
    p.add_argument("--length", type=int, default=20)
    sub.add_parser("bounds", parents=[common], help="ergodicity constants B1, B2")
    sub.add_parser("sofic", parents=[common], help="intercept closure and segment closure")
    sub.add_parser("partition", parents=[common], help="faces of the boundary orbit")
    sub.add_parser("graph", parents=[common], help="labelled transition graph and its analysis")
    p = sub.add_parser("simulate", parents=[common], help="float orbits, components, Ulam density")
    p.add_argument("--seeds", type=int, default=64)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--steps", type=int, default=100_000)
    p.add_argument("--ulam", type=int, default=0, help="Ulam grid size (0 to skip)")
    p = sub.add_parser("nonsofic", parents=[common], help="divergence witness for the fivefold lattice")
    p.add_argument("--beta", default="3", help="beta as an expression in omega")
    p.add_argument("--growth", type=int, default=0, help="steps of the exact growth check")
    p = sub.add_parser("nonergode", parents=[common], help="two invariant polygons for q = 4")
    p.add_argument("--beta", default="1039/1000")
    p.add_argument("--eta1", default="292/100")
    p.add_argument("--seeds", type=int, default=0)
    p.add_argument("--burn-in", type=int, default=1000)
    p.add_argument("--steps", type=int, default=20_000)
    return ap


def main(argv=None):
    ap = make_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    if args.cap is not None and args.cap <= 0:
        print("error: --cap must be positive", file=sys.stderr)
        return EXIT_USAGE
    out = Path(args.out)
    try:
        out.mkdir(parents=True, exist_ok=True)
        result = COMMANDS[args.command](args, out)
    except (ModelError, FieldError, ParseError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARAMS
    except CapExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CAP
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    failed = result.pop("_failed", False)
    print(json.dumps(_enc(result), indent=1, sort_keys=True))
    return EXIT_FAILED if failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
