"""Command-line entry point: ``sandglass <subcommand> [flags]``.

Exit status: 0 on success, 1 when the computed predicate or certificate
fails, 2 on usage or I/O errors. Payloads go to stdout, diagnostics to stderr.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import logging
import math
import sys
from pathlib import Path

from . import bounds, certify, constants, f2code, search, setfam

log = logging.getLogger("sandglass")


class UsageError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str):
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _load_pair(path: str) -> setfam.PairOfFamilies:
    try:
        return setfam.parse_pair(_read(path))
    except setfam.PairFormatError as exc:
        raise UsageError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Subcommands; each returns (payload, ok)


def cmd_verify(args):
    pair = _load_pair(args.pair)
    out = {"kind": args.kind, "n": pair.n, "size_a": len(pair.a), "size_b": len(pair.b)}
    if args.kind == "recovering":
        ok = setfam.is_recovering(pair)
    elif args.kind == "cancellative":
        ok = setfam.is_cancellative(pair, "both")
    elif args.kind == "left-cancellative":
        ok = setfam.is_cancellative(pair, "left")
    elif args.kind == "right-cancellative":
        ok = setfam.is_cancellative(pair, "right")
    else:
        try:
            k = setfam.uniformity(pair)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        out["uniform"] = k
        return out, k is not None
    out[args.kind] = ok
    return out, ok


def _sweep_rows(steps: int, theta: float):
    yield ["x", "y", "g", "g_star"]
    for i in range(1, steps):
        for j in range(1, steps):
            x, y = i / steps, j / steps
            yield [x, y, bounds.g_value(x, y, theta), bounds.g_value(x, y, theta, starred=True)]


def cmd_bounds(args):
    if args.sweep is not None:
        if args.sweep < 2:
            raise UsageError("--sweep needs at least 2 steps")
        return list(_sweep_rows(args.sweep, args.theta)), True
    try:
        params = bounds.BoundParams(theta=args.theta, alpha=args.alpha, mu_can=args.mu_can)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    report = bounds.recursion_conditions(params)
    out = {"rate": bounds.theorem_rate(params), "conditions": report.to_dict()}
    ok = report.all_hold
    if args.pair:
        pair = _load_pair(args.pair)
        try:
            chk = bounds.filtered_condition_check(pair, args.theta)
        except ValueError as exc:
            raise UsageError(f"{args.pair}: {exc}") from None
        la = math.log2(len(pair.a))
        lab = math.log2(pair.size_product)
        rf = bounds.rhs_bound(pair, args.theta)
        rg = bounds.rhs_bound(pair, args.theta, symmetric=True)
        info = {
            "k": chk.k,
            "log2_a": la,
            "log2_ab": lab,
            "rhs_f": rf,
            "rhs_g": rg,
            "filtered": {"holds": chk.holds, "threshold": chk.threshold, "worst_ratio": chk.worst[3]},
        }
        if chk.holds:
            info["one_sided_ok"] = la <= rf + 1e-9
            info["symmetric_ok"] = lab <= rg + 1e-9
            ok = ok and info["one_sided_ok"] and info["symmetric_ok"]
        out["pair"] = info
    return out, ok


def cmd_certify(args):
    if args.threshold is not None and args.threshold_log2 is not None:
        raise UsageError("give either --threshold or --threshold-log2, not both")
    if args.threshold_log2 is not None:
        if args.threshold_log2 <= 0:
            raise UsageError("--threshold-log2 must be positive")
        threshold = math.log2(args.threshold_log2)
    elif args.threshold is not None:
        threshold = args.threshold
    else:
        threshold = math.log2(constants.CLAIM_RATE)
    try:
        _, names = certify.FUNCTIONS[args.func]
    except KeyError:
        raise UsageError(f"--func: unknown function {args.func!r}; known: {sorted(certify.FUNCTIONS)}") from None
    values = {"theta": args.theta, "c": args.c}
    try:
        spec = certify.GridSpec(
            func=args.func,
            k=args.k,
            lipschitz=args.lipschitz,
            threshold=threshold,
            func_params=tuple(values[n] for n in names),
        )
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    cert = certify.grid_certify(spec, workers=args.workers)
    return cert.to_dict(), cert.passed


def cmd_tolhuizen(args):
    if args.matrix:
        try:
            mat = f2code.parse_matrix(_read(args.matrix))
        except ValueError as exc:
            raise UsageError(f"{args.matrix}: {exc}") from None
        rep = f2code.enumerate_information_sets(mat)
        try:
            pair = f2code.tolhuizen_pair(mat, rep.info_sets)
        except ValueError as exc:
            raise UsageError(f"{args.matrix}: {exc}") from None
        out = {
            "n": mat.n,
            "k": mat.k,
            "trials": 1,
            "best_info_sets": rep.count,
            "fraction": float(rep.fraction),
            "product": pair.size_product,
            "log3_ratio": math.log(pair.size_product) / (mat.n * math.log(3)) if mat.n else 0.0,
        }
    else:
        if args.n is None:
            raise UsageError("--n is required unless --matrix is given")
        k = args.k if args.k is not None else args.n // 3
        try:
            res = f2code.best_construction(args.n, k, args.trials, args.seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        mat, pair, out = res.matrix, res.pair, res.to_dict()
    left = setfam.is_cancellative(pair, "left")
    out["left_cancellative"] = left
    out["upper_check_ok"] = left and f2code.one_sided_upper_check(pair).ok
    if args.emit_pair:
        _write(args.emit_pair, setfam.format_pair(pair))
    if args.emit_matrix:
        _write(args.emit_matrix, f2code.format_matrix(mat))
    return out, left and out["upper_check_ok"]


def cmd_search(args):
    try:
        if args.budget is None and args.uniform is None and args.n <= search.EXHAUSTIVE_MAX_N:
            res = search.exhaustive_max_product(args.n, args.kind)
        else:
            budget = args.budget if args.budget is not None else 10**6
            res = search.bnb_max_product(args.n, args.kind, budget=budget, k_uniform=args.uniform)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    ok = search.verify_witness(res)
    out = res.to_dict()
    out["witness_ok"] = ok
    if args.emit_witness:
        _write(args.emit_witness, setfam.format_pair(res.witness))
    return out, ok


def cmd_constants(args):
    return constants.as_dict(), True


# ---------------------------------------------------------------------------
# Parsing


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--format", choices=("json", "csv", "text"), default=None)
    p.add_argument("--workers", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--config", help="JSON file whose keys mirror flags; flags win")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    parser = argparse.ArgumentParser(prog="sandglass", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", parents=[common], help="check a pair file")
    p.add_argument("--kind", required=True,
                   choices=("recovering", "cancellative", "left-cancellative", "right-cancellative", "uniform"))
    p.add_argument("--pair", required=True)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("bounds", parents=[common], help="rate arithmetic, pair bounds, g sweeps")
    p.add_argument("--theta", type=float, default=constants.THETA)
    p.add_argument("--alpha", type=float, default=constants.ALPHA)
    p.add_argument("--mu-can", type=float, default=constants.MU_CAN_JANZER)
    p.add_argument("--pair")
    p.add_argument("--sweep", type=int, help="emit g and g* on an (N-1)^2 interior grid as CSV")
    p.set_defaults(handler=cmd_bounds)

    p = sub.add_parser("certify", parents=[common], help="Lipschitz grid certificate")
    p.add_argument("--func", default="g_star")
    p.add_argument("--theta", type=float, default=constants.THETA)
    p.add_argument("--c", type=float, default=0.0, help="value for the 'constant' test function")
    p.add_argument("--k", type=int, default=constants.APPENDIX_K)
    p.add_argument("--lipschitz", type=float, default=constants.APPENDIX_LIPSCHITZ)
    p.add_argument("--threshold", type=float)
    p.add_argument("--threshold-log2", type=float, help="threshold is log2 of this value")
    p.set_defaults(handler=cmd_certify)

    p = sub.add_parser("tolhuizen", parents=[common], help="random linear-code construction")
    p.add_argument("--n", type=int)
    p.add_argument("--k", type=int, help="default floor(n/3)")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--matrix", help="evaluate this matrix file instead of random trials")
    p.add_argument("--emit-pair")
    p.add_argument("--emit-matrix")
    p.set_defaults(handler=cmd_tolhuizen)

    p = sub.add_parser("search", parents=[common], help="maximum-product search at small n")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--kind", required=True, choices=search.KINDS)
    p.add_argument("--budget", type=int)
    p.add_argument("--uniform", type=int)
    p.add_argument("--emit-witness")
    p.set_defaults(handler=cmd_search)

    p = sub.add_parser("constants", parents=[common], help="dump named constants")
    p.set_defaults(handler=cmd_constants)
    return parser


def _config_path(argv):
    for i, tok in enumerate(argv):
        if tok == "--config" and i + 1 < len(argv):
            return argv[i + 1]
        if tok.startswith("--config="):
            return tok.split("=", 1)[1]
    return None


def _apply_config(parser, argv):
    """Install ``--config`` keys as subcommand defaults before parsing."""
    path = _config_path(argv)
    command = next((t for t in argv if not t.startswith("-")), None)
    if path is None or command is None:
        return
    sub_action = next(a for a in parser._actions if isinstance(a, argparse._SubParsersAction))
    subparser = sub_action.choices.get(command)
    if subparser is None:
        return
    try:
        cfg = json.loads(_read(path))
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON ({exc})") from None
    if not isinstance(cfg, dict):
        raise UsageError(f"{path}: expected a JSON object")
    known = {a.dest for a in subparser._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in known or dest in ("config", "help", "handler"):
            raise UsageError(f"{path}: unknown key {key!r}")
        defaults[dest] = value
    subparser.set_defaults(**defaults)
    for a in subparser._actions:
        if a.dest in defaults:
            a.required = False


def _emit(payload, fmt: str, out):
    if fmt == "json":
        json.dump(payload, out, indent=2, allow_nan=False)
        out.write("\n")
    elif fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        if isinstance(payload, list):
            w.writerows(payload)
        else:
            flat = _flatten(payload)
            w.writerow(flat.keys())
            w.writerow(flat.values())
    else:
        if isinstance(payload, list):
            for row in payload:
                out.write(" ".join(map(str, row)) + "\n")
        else:
            for key, value in _flatten(payload).items():
                out.write(f"{key}: {value}\n")


def _flatten(d: dict, prefix: str = "") -> dict:
    out = {}
    for key, value in d.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict) and key not in ("witness",):
            out.update(_flatten(value, name + "."))
        elif isinstance(value, (list, dict)):
            out[name] = json.dumps(value)
        else:
            out[name] = value
    return out


def main(argv=None, stdout=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    stdout = stdout or sys.stdout
    parser = build_parser()
    try:
        _apply_config(parser, argv)
    except UsageError as exc:
        print(f"sandglass: error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        payload, ok = args.handler(args)
    except UsageError as exc:
        print(f"sandglass {args.command}: error: {exc}", file=sys.stderr)
        return 2
    fmt = args.format or ("csv" if isinstance(payload, list) else "json")
    buf = io.StringIO()
    _emit(payload, fmt, buf)
    stdout.write(buf.getvalue())
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())
