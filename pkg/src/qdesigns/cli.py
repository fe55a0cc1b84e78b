"""Command-line interface: ``qdesigns {golden,verify,classical,search}``.

Exit codes: 0 when every requested check passes, 1 when one fails (or a
search certifies absence), 2 on usage errors.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import classical as cl
from . import golden as gd
from .quantum import QOLSDesign, design_from_json, verify_design
from .search import SearchConfig, certify, search
from .tensor_core import (
    DEFAULT_TOL,
    BipartiteState,
    matrix_from_json,
    matrix_to_json,
    schmidt_values,
    unitarity_deficit,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, sort_keys=True) + "\n"


def _write(path: str | None, obj) -> None:
    if path:
        Path(path).write_text(_dump(obj) if not isinstance(obj, str) else obj, encoding="utf-8")


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        sys.stdout.write(_dump(payload))
    else:
        print(text)


# --- golden -----------------------------------------------------------------

def cmd_golden(args) -> int:
    tol = args.tolerance
    target = args.subtarget
    if target in ("u", "r", "gamma"):
        m = {"u": gd.build_golden_u, "r": gd.golden_reshuffled, "gamma": gd.golden_partial_transpose}[target]()
        report = verify_design(QOLSDesign.from_matrix(m), tol)
        _write(args.out, matrix_to_json(m))
        text = f"{report.to_text()}\n2-unitary: {'PASS' if report.passed else 'FAIL'}"
        _emit(args, text, {"object": target, "out": args.out, "report": report.to_dict()})
        return EXIT_OK if report.passed else EXIT_FAIL
    if target == "blocks":
        dec = gd.block_decompose()
        worst_u = max(unitarity_deficit(b) for b in dec.blocks)
        worst_s = max(
            float(np.max(np.abs(schmidt_values(BipartiteState((2, 2), row)) - 2 ** -0.5)))
            for b in dec.blocks for row in b
        )
        ok = dec.off_block_mass <= 1e-12 and worst_u <= tol and worst_s <= tol
        _write(args.out, {
            "p1": [int(x) + 1 for x in dec.p1],
            "p2": [int(x) + 1 for x in dec.p2],
            "blocks": [matrix_to_json(b) for b in dec.blocks],
        })
        text = (
            f"blocks: {len(dec.blocks)} of order 4\n"
            f"off-block mass: {_fmt(dec.off_block_mass)}\n"
            f"max block unitarity deficit: {_fmt(worst_u)}\n"
            f"max Schmidt deviation from 1/sqrt(2): {_fmt(worst_s)}\n"
            f"block form: {'PASS' if ok else 'FAIL'}"
        )
        _emit(args, text, {"object": "blocks", "out": args.out, "off_block_mass": dec.off_block_mass,
                           "max_unitarity_deficit": worst_u, "max_schmidt_deviation": worst_s, "passed": ok})
        return EXIT_OK if ok else EXIT_FAIL
    if target == "chess":
        records = gd.chess_table()
        ok = bool(np.array_equal(gd.decode_chess(records), gd.build_golden_u()))
        _write(args.out, records)
        text = f"chess records: {len(records)} pieces on 36 fields\nround trip: {'PASS' if ok else 'FAIL'}"
        if not args.out:
            text = "\n".join(
                f"psi_{r['row'][0]}{r['row'][1]}: {r['amp']} w^{r['phase']} {r['color']} {r['figure']}" for r in records
            ) + "\n" + text
        _emit(args, text, {"object": "chess", "out": args.out, "records": len(records), "passed": ok})
        return EXIT_OK if ok else EXIT_FAIL
    raise UsageError(f"unknown golden target {target!r}")


# --- verify -----------------------------------------------------------------

def load_design(path: str) -> QOLSDesign:
    try:
        obj = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read {path}: {exc}") from None
    try:
        if isinstance(obj, dict) and "rows" in obj:
            return QOLSDesign.from_matrix(matrix_from_json(obj))
        if isinstance(obj, dict) and "d" in obj:
            return design_from_json(obj)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    raise UsageError(f"{path} is neither a matrix nor a QOLS object")


def cmd_verify(args) -> int:
    design = load_design(args.file)
    report = verify_design(design, args.tolerance)
    _emit(args, f"design of order {design.d}\n{report.to_text()}", report.to_dict())
    return EXIT_OK if report.passed else EXIT_FAIL


# --- classical --------------------------------------------------------------

def _build_pair(d: int) -> cl.OrthogonalPair | None:
    named = {3: cl.GL3, 4: cl.GL4}
    if d in named:
        return named[d]
    if d >= 3 and d % 2:
        return cl.ols_odd(d)
    if d <= 4:
        return cl.search_ols_exhaustive(d).pair
    raise UsageError(f"no built-in construction of an orthogonal pair of order {d}")


def _grid_text(grid) -> str:
    return "\n".join(" ".join(f"{x:>3}" for x in row) for row in np.asarray(grid).tolist())


def cmd_classical(args) -> int:
    action = args.action
    if action == "mate":
        if args.infile:
            try:
                square = cl.parse_square(Path(args.infile).read_text(encoding="utf-8"))
            except (OSError, ValueError) as exc:
                raise UsageError(str(exc)) from None
        elif args.d:
            square = cl.latin_cyclic(args.d)
        else:
            raise UsageError("mate needs an order or --in FILE")
        if square.d > 7:
            raise UsageError("mate search is limited to order <= 7")
        res = cl.orthogonal_mate_search(square)
        payload = {"d": square.d, "transversals": len(res.transversals), "found": res.found}
        if res.found:
            _write(args.out, cl.format_pair(res.pair))
            payload["mate"] = [list(r) for r in res.pair.second.grid]
            text = f"transversals: {len(res.transversals)}\northogonal mate:\n{_grid_text(res.pair.second.grid)}"
        else:
            text = f"transversals: {len(res.transversals)}\nno orthogonal mate (search exhausted)"
        _emit(args, text, payload)
        return EXIT_OK if res.found else EXIT_FAIL

    if not args.d:
        raise UsageError(f"{action} needs an order d")
    pair = _build_pair(args.d)
    if pair is None:
        _emit(args, f"no orthogonal pair of order {args.d} (search exhausted)", {"d": args.d, "found": False})
        return EXIT_FAIL
    ok = bool(cl.is_orthogonal_pair(pair))
    if action == "build-ols":
        _write(args.out, cl.format_pair(pair))
        text = f"{cl.format_pair(pair)}orthogonal: {'yes' if ok else 'no'}"
        _emit(args, text, {"d": pair.d, "first": [list(r) for r in pair.first.grid],
                           "second": [list(r) for r in pair.second.grid], "orthogonal": ok})
        return EXIT_OK if ok else EXIT_FAIL
    if action == "magic":
        grid, total = cl.magic_square_of(pair)
        _write(args.out, {"d": pair.d, "grid": grid.tolist(), "sum": int(total)})
        _emit(args, f"{_grid_text(grid)}\nmagic sum {total}", {"d": pair.d, "grid": grid.tolist(), "sum": int(total)})
        return EXIT_OK
    if action == "encode":
        perm = cl.permutation_encoding(pair)
        report = verify_design(QOLSDesign.from_matrix(perm.T), args.tolerance)
        _write(args.out, matrix_to_json(perm))
        text = f"{_grid_text(perm.real.astype(int))}\n{report.to_text()}\n2-unitary: {'PASS' if report.passed else 'FAIL'}"
        _emit(args, text, {"d": pair.d, "out": args.out, "report": report.to_dict()})
        return EXIT_OK if report.passed else EXIT_FAIL
    raise UsageError(f"unknown classical action {action!r}")


# --- search -----------------------------------------------------------------

def _run_one(config: SearchConfig):
    return search(config)


def cmd_search(args) -> int:
    if args.d < 2:
        raise UsageError("search needs d >= 2")
    configs = [
        SearchConfig(args.d, max_iterations=args.iterations, target_deficit=args.target, seed=args.seed_start + s,
                     damping=args.damping, dual_unitary=args.dual_unitary)
        for s in range(args.seeds)
    ]
    if args.workers > 1:
        with ProcessPoolExecutor(args.workers) as pool:
            traces = list(pool.map(_run_one, configs))
    else:
        traces = [search(c) for c in configs]
    tol = args.tolerance if args.tolerance is not None else args.target
    outdir = Path(args.out) if args.out else None
    if outdir:
        outdir.mkdir(parents=True, exist_ok=True)
    results = []
    for tr in traces:
        seed = tr.config.seed
        final = tr.deficits[-1] if tr.deficits else (float("nan"),) * 3
        entry = {"seed": seed, "iterations": tr.iterations, "converged": tr.converged,
                 "delta_u": final[0], "delta_r": final[1], "delta_gamma": final[2]}
        if tr.converged:
            report = certify(tr, tol)
            entry["certified"] = report.passed
        results.append(entry)
        if outdir:
            (outdir / f"trace_seed{seed}.jsonl").write_text(tr.to_jsonl(), encoding="utf-8")
            _write(str(outdir / f"matrix_seed{seed}.json"), matrix_to_json(tr.matrix))
    converged = [r for r in results if r["converged"]]
    certified = [r for r in converged if r["certified"]]
    summary = {"d": args.d, "seeds": args.seeds, "converged": len(converged), "certified": len(certified),
               "runs": results}
    if outdir:
        _write(str(outdir / "summary.json"), summary)
    lines = [f"seed {r['seed']}: {'converged' if r['converged'] else 'not converged'} after {r['iterations']} sweeps, "
             f"max deficit {_fmt(max(r['delta_u'], r['delta_r'], r['delta_gamma']))}"
             + ("" if not r["converged"] else f", certificate {'PASS' if r['certified'] else 'FAIL'}")
             for r in results]
    lines.append(f"converged: {len(converged)}/{args.seeds}, certified: {len(certified)}/{len(converged)}")
    _emit(args, "\n".join(lines), summary)
    return EXIT_OK if len(certified) == len(converged) else EXIT_FAIL


# --- entry point ------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    io = argparse.ArgumentParser(add_help=False)
    io.add_argument("--out", default=None, help="output path")
    io.add_argument("--json", action="store_true", help="print JSON instead of text")
    common = argparse.ArgumentParser(add_help=False, parents=[io])
    common.add_argument("--tolerance", type=float, default=DEFAULT_TOL, help="check tolerance (default 1e-10)")

    ap = argparse.ArgumentParser(prog="qdesigns", description="Classical and quantum orthogonal Latin squares.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("golden", parents=[common], help="export the golden AME(4,6) objects")
    p.add_argument("subtarget", choices=["u", "gamma", "r", "blocks", "chess"])
    p.set_defaults(func=cmd_golden)

    p = sub.add_parser("verify", parents=[common], help="verify a matrix or QOLS JSON file")
    p.add_argument("file")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("classical", parents=[common], help="classical Latin square tools")
    p.add_argument("action", choices=["build-ols", "magic", "mate", "encode"])
    p.add_argument("d", type=int, nargs="?", default=None)
    p.add_argument("--in", dest="infile", default=None, help="Latin square file (for mate)")
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("search", parents=[io], help="alternating-projection search for 2-unitaries")
    p.add_argument("--tolerance", type=float, default=None, help="certificate tolerance (default: --target)")
    p.add_argument("d", type=int)
    p.add_argument("--seeds", type=int, default=10)
    p.add_argument("--seed-start", type=int, default=0)
    p.add_argument("--iterations", type=int, default=100_000)
    p.add_argument("--target", type=float, default=1e-8)
    p.add_argument("--damping", type=float, default=1.0)
    p.add_argument("--dual-unitary", action="store_true", help="drop the partial-transpose leg")
    p.add_argument("--workers", type=int, default=1)
    p.set_defaults(func=cmd_search)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
