"""Command-line front end.

Exit codes: 0 when a verdict is reached (or the command succeeds), 1 on
usage or configuration errors, 2 when the verdict is ``Undecided`` (or a
selftest criterion fails).
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import numpy as np

from . import config as cfgmod
from . import finsys
from . import seqclassify as sc
from . import seqmodel as sm
from . import selftest

EXIT_OK, EXIT_ERROR, EXIT_UNDECIDED = 0, 1, 2


class UsageError(Exception):
    pass


def _load(args) -> cfgmod.Config:
    cfg = cfgmod.load(args.config) if args.config else cfgmod.bundled()
    b = cfg.budgets
    if args.budget_N is not None:
        b = sc.Budgets(**{**b.to_dict(), "n_terms": args.budget_N})
    if args.budget_K is not None:
        b = sc.Budgets(**{**b.to_dict(), "k_cap_exp": args.budget_K})
    return cfgmod.Config(cfg.systems, b)


def _fmt(x) -> str:
    return format(float(x), ".17g")


def _witness_summary(w: finsys.Witness | None) -> dict | None:
    if w is None:
        return None
    return {"residuals": [float(r) for r in w.residuals], "cond": float(w.cond)}


def _find_witness(a: cfgmod.SystemConfig, b: cfgmod.SystemConfig, tol: float):
    if a.kind == b.kind == "graph-finite":
        ta, tb = a.matrix(), b.matrix()
        if ta.shape == tb.shape:
            return finsys.witness_graph_bounded(ta, tb)
    return finsys.witness_fin(a.system(), b.system(), tol)


def classify(cfg: cfgmod.Config, id1: str, id2: str, relation: str, tol: float) -> dict:
    a, b = cfg.get(id1), cfg.get(id2)
    if a.is_diagonal != b.is_diagonal:
        raise UsageError(f"kind mismatch: {a.kind} vs {b.kind}")
    witness = None
    if a.is_diagonal:
        try:
            v = sc.classify_diagonal(a.spec(), b.spec(), relation, cfg.budgets)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    else:
        v = sc.classify_finite(a.system(), b.system(), relation, tol)
        if v.relation in (sc.Relation.BOUNDED, sc.Relation.ALGEBRAIC, sc.Relation.UNITARY):
            witness = _witness_summary(_find_witness(a, b, tol))
    return {"pair": [id1, id2], "requested": relation, "verdict": v.to_dict(),
            "witness": witness, "budgets": cfg.budgets.to_dict()}


def invariants(cfg: cfgmod.Config, sid: str, tol: float) -> dict:
    s = cfg.get(sid)
    out: dict = {"id": sid, "kind": s.kind}
    if s.is_diagonal:
        spec = s.spec()
        out.update({
            "sh_exponent": sm.sh_exponent(spec),
            "range_closed": sm.range_closed(spec),
            "bounded": sm.domain_total(spec),
            "compact": spec.is_compact,
            "kernel_dim": str(spec.kernel_dim),
            "cokernel_dim": str(sm.cokernel_dim(spec)),
        })
    else:
        sys_ = s.system()
        h = finsys.halmos_decompose(sys_, tol)
        out.update({
            "ambient_dim": sys_.ambient_dim,
            "dims": list(sys_.dims),
            "dim_quadruple": list(finsys.dim_quadruple(sys_, tol)),
            "halmos_dims": list(h.dims),
            "generic_angles": [float(x) for x in h.generic_angles],
        })
    return out


def mu_csv(cfg: cfgmod.Config, sid: str, count: int, versus: str | None) -> str:
    spec = cfg.get(sid).spec() if cfg.get(sid).is_diagonal else None
    if spec is None or not spec.is_compact:
        raise UsageError(f"{sid}: mu-csv needs a compact diagonal model")
    mu = sm.mu_sequence(spec, count)
    cols, header = [np.arange(1, count + 1), mu], ["n", "mu"]
    if versus is not None:
        other = cfg.get(versus).spec() if cfg.get(versus).is_diagonal else None
        if other is None or not other.is_compact:
            raise UsageError(f"{versus}: mu-csv needs a compact diagonal model")
        mu2 = sm.mu_sequence(other, count)
        cols += [mu2, mu / mu2]
        header += ["mu_" + versus, "ratio"]
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in zip(*cols):
        w.writerow([str(int(row[0]))] + [_fmt(x) for x in row[1:]])
    return buf.getvalue()


def _text_report(rep: dict) -> str:
    lines = []
    for k in ("pair", "id", "kind", "requested"):
        if k in rep:
            lines.append(f"{k:<16}{rep[k]}")
    if "verdict" in rep:
        for k, v in rep["verdict"].items():
            lines.append(f"{k:<16}{v}")
    for k, v in rep.items():
        if k not in ("pair", "id", "kind", "requested", "verdict", "budgets", "timing_s"):
            lines.append(f"{k:<16}{v}")
    return "\n".join(lines)


def _emit(rep: dict, as_json: bool):
    print(json.dumps(rep, indent=2, sort_keys=True) if as_json else _text_report(rep))


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("-c", "--config", help="JSON config (default: bundled examples)")
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--budget-N", type=int, dest="budget_N", help="mu terms for ratio tests")
    common.add_argument("--budget-K", type=int, dest="budget_K",
                        help="dilation search up to K = 2^value")
    common.add_argument("--tol", type=float, default=finsys.ANGLE_TOL,
                        help="angle tolerance for finite systems")

    p = argparse.ArgumentParser(prog="twosubspace", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)
    c = sub.add_parser("classify", parents=[common], help="classify a pair of systems")
    c.add_argument("id1")
    c.add_argument("id2")
    c.add_argument("--relation", choices=("bounded", "algebraic", "unitary"), default="bounded")
    i = sub.add_parser("invariants", parents=[common], help="invariants of one system")
    i.add_argument("id")
    w = sub.add_parser("witness", parents=[common], help="explicit isomorphism of finite systems")
    w.add_argument("id1")
    w.add_argument("id2")
    w.add_argument("--out", help="write the witness matrix as CSV here")
    m = sub.add_parser("mu-csv", parents=[common], help="singular values (and ratios) as CSV")
    m.add_argument("id")
    m.add_argument("count", type=int)
    m.add_argument("--vs", help="second model for a ratio column")
    sub.add_parser("selftest", parents=[common], help="run the reproduction suite")
    return p


def _run(args) -> int:
    cfg = _load(args)
    t0 = time.perf_counter()
    if args.cmd == "classify":
        rep = classify(cfg, args.id1, args.id2, args.relation, args.tol)
        rep["timing_s"] = round(time.perf_counter() - t0, 6)
        _emit(rep, args.json)
        return EXIT_UNDECIDED if rep["verdict"]["relation"] == "Undecided" else EXIT_OK
    if args.cmd == "invariants":
        _emit(invariants(cfg, args.id, args.tol), args.json)
        return EXIT_OK
    if args.cmd == "witness":
        a, b = cfg.get(args.id1), cfg.get(args.id2)
        if a.is_diagonal or b.is_diagonal:
            raise UsageError("witness needs finite systems")
        wit = _find_witness(a, b, args.tol)
        rep = {"pair": [args.id1, args.id2], "witness": _witness_summary(wit)}
        if wit is None:
            rep["reason"] = "no witness: dimension quadruples (ranks) differ"
        elif args.out:
            np.savetxt(args.out, wit.map, delimiter=",", fmt="%.17g")
            rep["written"] = args.out
        else:
            rep["map"] = [[float(x) for x in row] for row in wit.map]
        _emit(rep, args.json)
        return EXIT_OK
    if args.cmd == "mu-csv":
        if args.count < 1:
            raise UsageError("count must be positive")
        sys.stdout.write(mu_csv(cfg, args.id, args.count, args.vs))
        return EXIT_OK
    outcomes = selftest.run(cfg.budgets)
    if args.json:
        print(selftest.report_json(outcomes))
    else:
        for o in outcomes:
            print(o.line())
    return EXIT_OK if all(o.passed for o in outcomes) else EXIT_UNDECIDED


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse reports usage errors with status 2, which is reserved here
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return _run(args)
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
