"""Command-line front end: ``torusfill <command> ...``.

Exit codes: 0 success, 1 a verification failed, 2 bad usage, 3 the target
is not a boundary in the model, 4 a search budget or size cap was hit.
"""
from __future__ import annotations

import argparse
import contextlib
import json
import logging
import os
import sys
import tempfile
from dataclasses import dataclass
from pathlib import Path

from . import __version__
from .chains import chain_from_dict, load_chain
from .constructions import (FillingPair, default_pair_path, fv_upper_bounds, load_filling_pair,
                            make_c, make_filling_W, isv_upper_bound, solve_alpha_beta,
                            write_fv_csv)
from .filling import (DEFAULT_MAX_UNIVERSE, DEFAULT_NODE_CAP, BudgetExhausted, ModelInfeasible,
                      NotRepresentable, UniverseTooLarge, build_model,
                      fill_int, fill_real, oracle_fill_int)
from .layered import (TriangulationError, check, cover_triangulation, delta_upper_bound_table,
                      expected_h1, homology_h1, write_delta_csv)
from .mcg import Anosov, Sl2Matrix, classify, spine_growth_table, write_growth_csv
from .steps import ChainStore, failed_steps, verify_steps

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INFEASIBLE, EXIT_BUDGET = 0, 1, 2, 3, 4

log = logging.getLogger("torusfill")


@dataclass(frozen=True)
class RunConfig:
    max_universe: int = DEFAULT_MAX_UNIVERSE
    node_cap: int = DEFAULT_NODE_CAP
    out_dir: str = "."
    cache: str | None = None
    verbosity: int = 0

    def __post_init__(self):
        if self.max_universe <= 0 or self.node_cap <= 0:
            raise ValueError("caps must be positive")


def _config(args) -> RunConfig:
    return RunConfig(args.max_universe, args.node_cap, args.out_dir, args.cache, args.verbose)


def _provenance(args, cfg: RunConfig) -> dict:
    prov = {"tool": f"torusfill {__version__}", "command": args.command}
    for key in ("k", "matrix", "power", "model", "mode", "budget", "tamper"):
        val = getattr(args, key, None)
        if val is not None:
            prov[key] = val
    prov["max_universe"] = cfg.max_universe
    prov["node_cap"] = cfg.node_cap
    return prov


def _target(cfg: RunConfig, out: str | None) -> Path | None:
    if out is None or out == "-":
        return None
    p = Path(out)
    return p if p.is_absolute() else Path(cfg.out_dir) / p


@contextlib.contextmanager
def _atomic(path: Path | None):
    """Yield a temporary path that replaces ``path`` on success.

    With ``path=None`` the temporary file is echoed to stdout instead.
    """
    folder = path.parent if path is not None else Path(tempfile.gettempdir())
    folder.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=folder, prefix=".torusfill-")
    os.close(fd)
    try:
        yield tmp
        if path is None:
            sys.stdout.write(Path(tmp).read_text())
        else:
            os.replace(tmp, path)
    finally:
        if os.path.exists(tmp):
            os.unlink(tmp)


def _write_json(path: Path | None, data: dict, indent: int | None = 1) -> None:
    with _atomic(path) as tmp:
        Path(tmp).write_text(json.dumps(data, indent=indent) + "\n")


def _pair(args) -> FillingPair:
    path = args.cache
    if args.regenerate:
        pair = solve_alpha_beta()
        dest = Path(path) if path else None
        if dest is None:
            raise SystemExit("--regenerate needs --cache PATH to write to")
        with _atomic(dest) as tmp:
            pair.save(tmp)
        log.info("regenerated filling pair into %s", dest)
        return pair
    return load_filling_pair(path)


# -- commands ----------------------------------------------------------------------

def cmd_verify_steps(args) -> int:
    if args.k < 1:
        raise SystemExit("--k must be at least 1")
    if args.cache and not args.regenerate:
        # the cache is checked, not trusted: read the raw chains
        raw = json.loads(Path(args.cache).read_text())
        store = ChainStore(chain_from_dict(raw["alpha"]), chain_from_dict(raw["beta"]))
    else:
        store = ChainStore.default(_pair(args) if args.regenerate else None)
    for item in args.tamper or ():
        name, *idx = item.split(":")
        store = store.tampered(name, *(int(i) for i in idx))
    results = verify_steps(args.k, store)
    for r in results:
        print(r)
    bad = failed_steps(results)
    if bad:
        print(f"FAILED: {', '.join(bad)}")
        return EXIT_FAIL
    print(f"all {len(results)} identities hold for k = 1..{args.k}")
    return EXIT_OK


def _parse_model(text: str) -> tuple[int, int, int, int]:
    parts = tuple(int(p) for p in text.split(","))
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("--model expects m,d,q,D")
    return parts


def cmd_fill(args) -> int:
    cfg = _config(args)
    z = load_chain(args.chain)
    m, d, q, D = args.model
    if (z.ambient_dim, z.degree) != (m, d):
        print(f"chain lives in degree {z.degree} on T^{z.ambient_dim}, model is ({m}, {d})",
              file=sys.stderr)
        return EXIT_USAGE
    try:
        model = build_model(m, d, q, D, cfg.max_universe)
        if args.mode == "oracle":
            args.budget = 12 if args.budget is None else args.budget
            value = oracle_fill_int(model, z, args.budget)
            if value is None:
                print(f"no integral filling of norm <= {args.budget}", file=sys.stderr)
                return EXIT_BUDGET
            out = {"provenance": _provenance(args, cfg), "mode": "oracle",
                   "model": model.params(), "value": [value, 1]}
            _write_json(_target(cfg, args.out), out)
            print(f"value = {value}", file=sys.stderr)
            return EXIT_OK
        cert = fill_int(model, z, cfg.node_cap) if args.mode == "int" else fill_real(model, z)
    except (ModelInfeasible, NotRepresentable) as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (BudgetExhausted, UniverseTooLarge) as exc:
        print(f"budget: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    data = {"provenance": _provenance(args, cfg), **cert.to_dict(model)}
    _write_json(_target(cfg, args.out), data)
    print(f"value = {cert.value} (LP bound {cert.lp_value})", file=sys.stderr)
    return EXIT_OK


def cmd_fv_bounds(args) -> int:
    cfg = _config(args)
    pair = _pair(args)
    bounds = fv_upper_bounds(args.k, pair)
    header = {**_provenance(args, cfg), "pair_norm": pair.norm}
    with _atomic(_target(cfg, args.out)) as tmp:
        write_fv_csv(bounds, tmp, header)
    if args.isv:
        c = make_c()
        for b in bounds:
            total = isv_upper_bound(c, make_filling_W(b.k, pair))
            print(f"k={b.k} isv <= {total} ({total}/{b.n})", file=sys.stderr)
    return EXIT_OK


def cmd_classify(args) -> int:
    A = Sl2Matrix.parse(args.matrix)
    kind = classify(A)
    fv = "fv_ℤ > 0" if isinstance(kind, Anosov) else "fv_ℤ = 0"
    print(f"{kind}; {fv}")
    return EXIT_OK


def cmd_growth(args) -> int:
    cfg = _config(args)
    A = Sl2Matrix.parse(args.matrix)
    rows = spine_growth_table(A, args.power)
    with _atomic(_target(cfg, args.out)) as tmp:
        write_growth_csv(rows, tmp, _provenance(args, cfg))
    return EXIT_OK


def cmd_delta_table(args) -> int:
    cfg = _config(args)
    A = Sl2Matrix.parse(args.matrix)
    rows = delta_upper_bound_table(A, args.power)
    with _atomic(_target(cfg, args.out)) as tmp:
        write_delta_csv(rows, tmp, _provenance(args, cfg))
    return EXIT_OK


def cmd_layered(args) -> int:
    cfg = _config(args)
    A = Sl2Matrix.parse(args.matrix)
    try:
        tri = cover_triangulation(A, args.power)
    except TriangulationError as exc:
        print(f"invalid triangulation: {exc}", file=sys.stderr)
        return EXIT_FAIL
    data = {**tri.to_dict(), "provenance": _provenance(args, cfg)}
    _write_json(_target(cfg, args.out), data, indent=None)
    if not args.check:
        return EXIT_OK
    report = check(tri)
    h1, want = homology_h1(tri), expected_h1(A ** args.power)
    print(f"checks passed: {report}", file=sys.stderr)
    print(f"H1 = {h1} (expected {want})", file=sys.stderr)
    return EXIT_OK if h1 == want else EXIT_FAIL


# -- parser ----------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-universe", type=int, default=DEFAULT_MAX_UNIVERSE)
    common.add_argument("--node-cap", type=int, default=DEFAULT_NODE_CAP)
    common.add_argument("--out-dir", default=".")
    common.add_argument("--out", help="output file (default: stdout)")
    common.add_argument("--cache", help=f"filling pair JSON (default: {default_pair_path()})")
    common.add_argument("--regenerate", action="store_true",
                        help="recompute the filling pair and write it to --cache")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="torusfill", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"torusfill {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("verify-steps", parents=[common], help="check the filling identities")
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--tamper", action="append", metavar="NAME[:k[:i]]",
                   help="negate one coefficient of a stored chain (negative control)")
    s.set_defaults(func=cmd_verify_steps)

    s = sub.add_parser("fill", parents=[common], help="least filling inside a finite model")
    s.add_argument("chain", help="chain JSON file")
    s.add_argument("--model", type=_parse_model, required=True, metavar="m,d,q,D")
    s.add_argument("--mode", choices=("int", "real", "oracle"), default="int")
    s.add_argument("--budget", type=int, help="norm budget for --mode oracle (default 12)")
    s.set_defaults(func=cmd_fill)

    s = sub.add_parser("fv-bounds", parents=[common], help="CSV of |W_k| / 4^k")
    s.add_argument("--k", type=int, default=4)
    s.add_argument("--isv", action="store_true", help="also report mapping torus bounds")
    s.set_defaults(func=cmd_fv_bounds)

    s = sub.add_parser("classify", parents=[common], help="classify an SL(2,Z) matrix")
    s.add_argument("--matrix", required=True, metavar="a,b,c,d")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("growth", parents=[common], help="CSV of flip distances d(A^i t0, t0)")
    s.add_argument("--matrix", required=True, metavar="a,b,c,d")
    s.add_argument("--power", type=int, default=15, help="largest i")
    s.set_defaults(func=cmd_growth)

    s = sub.add_parser("delta-table", parents=[common], help="CSV of cover triangulation sizes")
    s.add_argument("--matrix", required=True, metavar="a,b,c,d")
    s.add_argument("--power", type=int, default=6, help="largest i")
    s.set_defaults(func=cmd_delta_table)

    s = sub.add_parser("layered", parents=[common], help="triangulate the mapping torus of A^i")
    s.add_argument("--matrix", required=True, metavar="a,b,c,d")
    s.add_argument("--power", type=int, default=1)
    s.add_argument("--check", action="store_true", help="validate and compare H_1")
    s.set_defaults(func=cmd_layered)
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.WARNING - 10 * min(args.verbose, 2),
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _config(args)
    except ValueError as exc:
        parser.error(str(exc))
    try:
        return args.func(args)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
