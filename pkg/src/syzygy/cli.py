"""Command line front end: ``syzygy {verify,betti,lemma22,prcheck,petri}``.

Exit codes: 0 when every check passes, 2 on a verification failure, 3 on
bad parameters. Reports go to stdout as JSON lines.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import os
import random
import sys
from concurrent.futures import ProcessPoolExecutor

from . import curvering, exactla, hypmodel, koszul
from .exactla import Mode, ModularConfig
from .report import PASS, ParameterError, Report, VerificationError, serialize_element, timed

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 2, 3

log = logging.getLogger("syzygy")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


def _setup_logging() -> None:
    level = os.environ.get("SYZYGY_LOG", "error").upper()
    if level not in ("ERROR", "INFO", "DEBUG"):
        level = "ERROR"
    logging.basicConfig(level=getattr(logging, level), stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")


def _config(args) -> ModularConfig:
    if not getattr(args, "mod", None):
        if getattr(args, "confirm_exact", False):
            raise ParameterError("--confirm-exact needs --mod")
        return exactla.EXACT
    primes = tuple(int(p) for p in args.mod.split(","))
    mode = Mode.MODULAR_CONFIRM if args.confirm_exact else Mode.MODULAR_PROBE
    return ModularConfig(primes, mode)


def _default_jobs() -> int:
    try:
        return len(os.sched_getaffinity(0))
    except AttributeError:
        return os.cpu_count() or 1


def _emit(reports, out, timing: bool) -> None:
    for rep in reports:
        d = rep if isinstance(rep, dict) else rep.to_dict()
        if not timing:
            d["elapsed_ms"] = 0
        out.write(json.dumps(d, sort_keys=True, separators=(",", ":")) + "\n")


# ---------------------------------------------------------------- verify


def _guard(rep: Report, fn) -> Report:
    with timed(rep):
        try:
            fn(rep)
        except VerificationError as exc:
            rep.fail(str(exc), exc.witness)
    return rep


def _phir_task(g, r, cfg):
    def run(rep):
        m = hypmodel.phir(g, r).matrix
        rk = exactla.rank(m, cfg)
        rep.dims.update(rank=rk, expected=math.comb(g, r), leading_certificate=hypmodel.phir_leading_certificate(g, r))
        if rk != math.comb(g, r):
            rep.fail("phi_r is not injective", {"rank": rk})
        if not rep.dims["leading_certificate"]:
            rep.fail("leading terms do not certify injectivity", {})

    return _guard(Report("phir", {"g": g, "r": r}), run)


def _what_task(g, r):
    def run(rep):
        w = hypmodel.what_element(g, r)
        rep.dims.update(dim_Wr=math.comb(g, r), dim_W_hat=math.comb(g, r) + 1)
        rep.witnesses.append({"w_hat": serialize_element(w)})

    return _guard(Report("what_element", {"g": g, "r": r}), run)


def _z_task(g, r):
    def run(rep):
        z = hypmodel.z_element(g, r)
        rep.dims.update(terms=len(z), p_hat_image_terms=len(hypmodel.p_hat(g, r, z)))
        rep.witnesses.append({"z": serialize_element(z)})

    return _guard(Report("z_element", {"g": g, "r": r}), run)


def _contract_task(g, r):
    def run(rep):
        res = hypmodel.contract_z(g, r)
        rep.dims.update(nonzero=sum(1 for _, v in res if v), ker_dim=r * (g - 1 - r))

    return _guard(Report("contract_z", {"g": g, "r": r}), run)


def _kergen_task(g, r):
    def run(rep):
        gens = hypmodel.ker_product_generators(g, r)
        rep.dims.update(generators=len(gens), ker_dim=(r + 1) * (g - r) - g)

    return _guard(Report("ker_product_generators", {"g": g, "r": r}), run)


def verify_pair(g: int, r: int, cfg: ModularConfig, seed: int, curves: int) -> list[dict]:
    reports = [
        _phir_task(g, r, cfg),
        hypmodel.verify_pq(g, r, cfg),
        _what_task(g, r),
        _z_task(g, r),
        _contract_task(g, r),
        _kergen_task(g, r),
    ]
    rng = random.Random(f"curve:{seed}:{g}:{r}")
    for k in range(curves):
        rep = hypmodel.lemma35_check(g, r, curvering.HypCurve.random(g, rng))
        rep.params.update(seed=seed, curve_index=k)
        reports.append(rep)
    for rep in reports:
        rep.params.setdefault("seed", seed)
    return [rep.to_dict() for rep in reports]


def _verify_star(args):
    return verify_pair(*args)


def cmd_verify(args, out) -> int:
    if args.gmin < 3 or args.gmax < args.gmin:
        raise ParameterError("need 3 <= gmin <= gmax")
    cfg = _config(args)
    pairs = hypmodel.valid_pairs(args.gmin, args.gmax, args.r)
    if args.dump_matrix:
        if len(pairs) != 1:
            raise ParameterError("--dump-matrix needs exactly one (g, r) pair")
        g, r = pairs[0]
        with open(args.dump_matrix, "w", newline="\n") as fh:
            fh.write(hypmodel.p_map(g, r).matrix.dumps())
    work = [(g, r, cfg, args.seed, args.curves) for g, r in pairs]
    jobs = args.jobs or _default_jobs()
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_verify_star, work))
    else:
        results = [_verify_star(w) for w in work]
    flat = [rep for batch in results for rep in batch]
    _emit(flat, out, args.timing)
    return EXIT_OK if all(rep["verdict"] == PASS for rep in flat) else EXIT_FAIL


# ---------------------------------------------------------------- betti


def cmd_betti(args, out) -> int:
    if args.model == "veronese":
        if args.n is None:
            raise ParameterError("--n is required for the veronese model")
        ring = koszul.veronese_ring(args.n, args.qmax + 1)
        params = {"model": "veronese", "n": args.n}
    else:
        if args.g is None:
            raise ParameterError("--g is required for the hyperelliptic model")
        if args.g < 3:
            raise ParameterError("hyperelliptic canonical ring needs g >= 3")
        if args.f:
            curve = curvering.HypCurve(args.g, curvering.parse_poly(args.f))
        else:
            curve = curvering.HypCurve.random(args.g, random.Random(f"curve:{args.seed}:{args.g}"))
        ring = curvering.canonical_ring(curve, args.qmax + 1)
        params = {"model": "hyperelliptic", "g": args.g, "f": curve.coeff_strings()}
    pmax = args.pmax if args.pmax is not None else ring.vdim
    table = koszul.betti_table(ring, pmax, args.qmax, _config(args))
    verdict = koszul.verdict_text(koszul.np_verdict(table))
    if args.format == "json":
        params.update(pmax=pmax, qmax=args.qmax)
        out.write(json.dumps({"params": params, "betti": table.to_dict(), "verdict": verdict}, sort_keys=True) + "\n")
    else:
        out.write(table.to_csv())
        out.write(f"# {verdict}\n")
    return EXIT_OK


# ---------------------------------------------------------------- lemma22


def cmd_lemma22(args, out) -> int:
    g, m = args.g, args.m
    if g < 2:
        raise ParameterError("genus must be >= 2")
    if m < 1 or 2 * m > g - 1:
        raise ParameterError(f"need 1 <= m <= (g-1)/2, got m={m}")
    rng = random.Random(f"lemma22:{args.seed}:{g}:{m}")
    curve = curvering.HypCurve(g, curvering.parse_poly(args.f)) if args.f else curvering.HypCurve.random(g, rng)
    drawn = curvering.PencilDatum.random(g, m, rng)
    pd = curvering.PencilDatum(
        m,
        curvering.parse_poly(args.s0) if args.s0 else drawn.s0,
        curvering.parse_poly(args.s1) if args.s1 else drawn.s1,
        curvering.parse_poly(args.t) if args.t else drawn.t,
    )
    rep = curvering.lemma22_check(curve, pd)
    rep.params["seed"] = args.seed
    _emit([rep], out, args.timing)
    return EXIT_OK if rep.ok else EXIT_FAIL


# ---------------------------------------------------------------- prcheck


def pr_rows(gmin: int, gmax: int) -> list[Report]:
    if gmin < 3 or gmax < gmin:
        raise ParameterError("need 3 <= gmin <= gmax")
    return [koszul.pr_report(g, r) for g in range(gmin, gmax + 1) for r in range(0, (g - 1) // 2 + 1)]


def cmd_prcheck(args, out) -> int:
    rows = pr_rows(args.gmin, args.gmax)
    if args.format == "json":
        _emit(rows, out, args.timing)
    else:
        out.write("g,r,wedge_H0K_dual,h0_wedge_E,cokernel,verdict\n")
        for rep in rows:
            d = rep.dims
            verdict = "surjective" if d["surjective"] else "not-surjective"
            out.write(f"{rep.params['g']},{rep.params['r']},{d['wedge_H0K_dual']},{d['h0_wedge_E']},{d['cokernel']},{verdict}\n")
    return EXIT_OK if all(rep.ok for rep in rows) else EXIT_FAIL


# ---------------------------------------------------------------- petri


def cmd_petri(args, out) -> int:
    m = hypmodel.p_map(args.g, args.r).matrix
    text = m.dumps()
    if args.out:
        with open(args.out, "w", newline="\n") as fh:
            fh.write(text)
    else:
        out.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="syzygy", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def modular(p):
        p.add_argument("--mod", help="comma-separated primes for modular rank probes")
        p.add_argument("--confirm-exact", action="store_true", help="confirm modular ranks by exact elimination")

    v = sub.add_parser("verify", help="verify the hyperelliptic constructions over a genus range")
    v.add_argument("--gmin", type=int, required=True)
    v.add_argument("--gmax", type=int, required=True)
    v.add_argument("--r", type=int, default=None, help="fixed exterior degree (default: all valid)")
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--curves", type=int, default=3, help="random curves per (g, r) for the span check")
    v.add_argument("--jobs", type=int, default=None)
    v.add_argument("--dump-matrix", metavar="FILE")
    v.add_argument("--timing", action="store_true", help="record wall-clock times (breaks byte-identity)")
    modular(v)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("betti", help="Koszul Betti window and N_p verdict")
    b.add_argument("--model", choices=["hyperelliptic", "veronese"], required=True)
    b.add_argument("--g", type=int)
    b.add_argument("--n", type=int)
    b.add_argument("--f", help="coefficients c0,...,c_{2g+2} of f")
    b.add_argument("--seed", type=int, default=0)
    b.add_argument("--qmax", type=int, default=3)
    b.add_argument("--pmax", type=int, default=None)
    b.add_argument("--format", choices=["csv", "json"], default="csv")
    modular(b)
    b.set_defaults(func=cmd_betti)

    l = sub.add_parser("lemma22", help="check the connecting image of a pencil element")
    l.add_argument("--g", type=int, required=True)
    l.add_argument("--m", type=int, required=True)
    for name in ("s0", "s1", "t", "f"):
        l.add_argument(f"--{name}", help="comma-separated coefficients, low degree first")
    l.add_argument("--seed", type=int, default=0)
    l.add_argument("--timing", action="store_true")
    l.set_defaults(func=cmd_lemma22)

    pr = sub.add_parser("prcheck", help="dimension audit of wedge^r H0(K)* -> H0(wedge^r E)")
    pr.add_argument("--gmin", type=int, required=True)
    pr.add_argument("--gmax", type=int, required=True)
    pr.add_argument("--format", choices=["csv", "json"], default="csv")
    pr.add_argument("--timing", action="store_true")
    pr.set_defaults(func=cmd_prcheck)

    pe = sub.add_parser("petri", help="dump the Petri matrix p for (g, r)")
    pe.add_argument("--g", type=int, required=True)
    pe.add_argument("--r", type=int, required=True)
    pe.add_argument("--out", metavar="FILE")
    pe.set_defaults(func=cmd_petri)
    return parser


def main(argv=None, out=None) -> int:
    _setup_logging()
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
        return args.func(args, out)
    except (UsageError, ValueError) as exc:
        print(f"syzygy: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
