"""Command-line entry point.

Every subcommand writes its CSV/JSON artifacts into --out-dir together
with a run.json manifest (config digest, content hashes, wall time).
Exit codes: 0 success, 2 validation/usage failure, 3 acceptance failure.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import os
import sys
import time

from . import __version__, constants, gaps, moments, omega, singular
from .acceptance import run_acceptance

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_ACCEPTANCE = 3


def _fmt_const(x: float) -> str:
    return f"{x:.10g}"


def _fmt_prop(x: float) -> str:
    return f"{x:.10f}"


class _Runner:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.out_dir = args.out_dir
        os.makedirs(self.out_dir, exist_ok=True)
        self.outputs: dict[str, str] = {}
        self.t0 = time.time()

    def write_text(self, name: str, text: str) -> None:
        path = os.path.join(self.out_dir, name)
        with open(path, "w") as f:
            f.write(text)
        self.outputs[name] = hashlib.sha256(text.encode()).hexdigest()

    def write_csv(self, name: str, header: list[str], rows) -> None:
        lines = [",".join(header)]
        lines.extend(",".join(str(c) for c in row) for row in rows)
        self.write_text(name, "\n".join(lines) + "\n")

    def finish(self) -> None:
        config = {k: v for k, v in sorted(vars(self.args).items()) if k != "func"}
        blob = json.dumps(config, sort_keys=True, separators=(",", ":"), default=str)
        manifest = {
            "config": config,
            "config_digest": hashlib.sha256(blob.encode()).hexdigest(),
            "version": __version__,
            "wall_time_s": round(time.time() - self.t0, 3),
            "outputs": self.outputs,
        }
        path = os.path.join(self.out_dir, "run.json")
        with open(path, "w") as f:
            json.dump(manifest, f, indent=2, sort_keys=True)
            f.write("\n")


def cmd_scan(args) -> int:
    run = _Runner(args)
    rep = gaps.scan(args.lo, args.hi, threads=args.threads,
                    checkpoint_path=args.checkpoint)
    run.write_text("scan_report.json", json.dumps(rep.to_dict(), indent=2) + "\n")
    if args.gaps_csv:
        rows = []
        for n, rec in enumerate(gaps.scan_records(args.lo, args.hi), start=1):
            rows.append((n, rec.p, rec.p_next, rec.gap_len,
                         int(rec.contains_rough),
                         "" if rec.witness is None else rec.witness,
                         int(rec.strict_contains)))
        run.write_csv("gaps.csv",
                      ["n", "p", "p_next", "gap_len", "contains_rough", "witness",
                       "strict_contains"], rows)
    run.finish()
    return EXIT_OK


def cmd_series(args) -> int:
    run = _Runner(args)
    series = gaps.proportion_series(args.n_max, stride=args.stride)
    run.write_csv("series.csv", ["N", "proportion", "proportion_times_logN"],
                  [(N, _fmt_prop(p), _fmt_prop(pl)) for N, p, pl in series])
    run.finish()
    return EXIT_OK


def cmd_omega(args) -> int:
    run = _Runner(args)
    om_rows, ch_rows = [], []
    table = omega.ch_table(args.h_max)
    for row in table:
        om = omega.omega(row.h)
        for b in om.residues:
            om_rows.append((row.h, om.modulus.value, b))
        ch_rows.append((row.h, row.omega_count, row.denom,
                        _fmt_const(row.value.value), _fmt_const(row.cumulative.value)))
    run.write_csv("omega.csv", ["h", "modulus", "residue"], om_rows)
    run.write_csv("ch.csv", ["h", "omega_count", "denominator", "c_h", "cumulative"], ch_rows)
    if args.h_max >= 18:
        lines = [f"{'h':>3} {'count':>6} {'c_h':>10} {'cumulative':>10}  notes"]
        for e in omega.compare_table():
            lines.append(f"{e['h']:>3} {e['computed_count']:>6} {e['computed_c']:>10.4f} "
                         f"{e['computed_cumulative']:>10.4f}  {'; '.join(e['notes']) or 'ok'}")
        text = "\n".join(lines)
        print(text)
        run.write_text("table_report.txt", text + "\n")
    run.finish()
    return EXIT_OK


def cmd_constants(args) -> int:
    run = _Runner(args)
    S = constants.twin_prime_constant(1e-9)
    eg = constants.exp_neg_gamma()
    vals = [("twin_prime_constant", S),
            ("exp_neg_gamma", eg),
            ("mertens_V_z1e4", constants.mertens_V(10 ** 4)),
            ("buchstab_omega_4", constants.buchstab_omega(4.0)),
            ("buchstab_omega_10", constants.buchstab_omega(10.0))]
    wp = constants.window_params(args.H, args.z)
    vals += [(f"R_H{args.H}_z{args.z}", wp.R), (f"Rprime_H{args.H}_z{args.z}", wp.R_prime)]
    width = max(len(n) for n, _ in vals)
    for name, cv in vals:
        print(f"{name:<{width}}  {_fmt_const(cv.value):>16}  +/- {cv.radius:.2e}")
    run.write_text("constants.json", json.dumps(
        [{"name": n, "value": cv.value, "radius": cv.radius} for n, cv in vals],
        indent=2) + "\n")
    run.finish()
    return EXIT_OK


def cmd_singular(args) -> int:
    run = _Runner(args)
    D = singular.TupleSet(tuple(args.tuple))
    sv = singular.singular(D)
    out = {"tuple": list(D.elements), "value": sv.value.value, "radius": sv.value.radius}
    if args.z:
        out["truncated_z"] = args.z
        out["truncated"] = float(singular._truncated_fraction(D, args.z))
    if D.k <= singular.MAX_ZERO_TUPLE:
        out["inclusion_exclusion"] = singular.singular_zero(D).value
    print(json.dumps(out, indent=2))
    run.write_text("singular.json", json.dumps(out, indent=2) + "\n")
    run.finish()
    return EXIT_OK


def cmd_montgomery(args) -> int:
    run = _Runner(args)
    ms = singular.montgomery_sums(args.w)
    run.write_csv("montgomery.csv",
                  ["w", "plain", "predicted_plain", "weighted", "predicted_weighted"],
                  [(args.w, _fmt_const(ms["plain"]), _fmt_const(ms["predicted_plain"]),
                    _fmt_const(ms["weighted"]), _fmt_const(ms["predicted_weighted"]))])
    run.finish()
    return EXIT_OK


def cmd_paircorr(args) -> int:
    run = _Runner(args)
    rows = singular.pair_correlation(args.X, args.z, args.h_max)
    run.write_csv("paircorr.csv", ["h", "S_empirical", "V_predicted", "ratio"],
                  [(r["h"], _fmt_const(r["S_empirical"]), _fmt_const(r["V_predicted"]),
                    "" if r["ratio"] is None else _fmt_const(r["ratio"])) for r in rows])
    run.finish()
    return EXIT_OK


def cmd_moments(args) -> int:
    run = _Runner(args)
    hist = moments.window_histogram(args.X, args.H, args.z)
    rep = moments.moments(hist, K_max=min(args.k_max, 6) if args.k_max >= 6 else args.k_max)
    rep6 = moments.moments(hist, K_max=max(args.k_max, 6))
    m = rep6.central_moments
    run.write_csv("moments.csv",
                  ["X", "H", "z", "R", "Rprime", "mean", "m2", "m3", "m4", "m5", "m6",
                   "zero_windows"],
                  [(args.X, args.H, args.z,
                    _fmt_const(rep.params.R.value), _fmt_const(rep.params.R_prime.value),
                    _fmt_const(rep.mean), *(_fmt_const(m[k]) for k in range(2, 7)),
                    rep.zero_windows)])
    run.finish()
    return EXIT_OK


def cmd_nh(args) -> int:
    run = _Runner(args)
    rows = moments.nh_decay_check(args.X, args.h_max, ch_max=args.ch_max)
    run.write_csv("nh.csv", ["h", "N_h", "comparator", "ratio"],
                  [(r["h"], r["N_h"],
                    "" if r["comparator"] is None else _fmt_const(r["comparator"]),
                    "" if r["ratio"] is None else _fmt_const(r["ratio"])) for r in rows])
    run.finish()
    return EXIT_OK


def cmd_check(args) -> int:
    run = _Runner(args)
    results = run_acceptance(args.profile)
    run.write_text("acceptance.json", json.dumps(
        [{"criterion": r.cid, "name": r.name, "passed": r.passed,
          "detail": r.detail, "seconds": round(r.seconds, 2)} for r in results],
        indent=2) + "\n")
    run.finish()
    return EXIT_OK if all(r.passed for r in results) else EXIT_ACCEPTANCE


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="roughgaps",
                                 description="Prime gap / rough number statistics toolkit")
    ap.add_argument("--out-dir", default=os.environ.get("ROUGHGAPS_OUT", "out"),
                    help="artifact directory (env ROUGHGAPS_OUT)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("scan", help="classify all gaps with p in [lo, hi]")
    p.add_argument("--lo", type=int, required=True)
    p.add_argument("--hi", type=int, required=True)
    p.add_argument("--threads", type=int, default=1)
    p.add_argument("--checkpoint", default=None)
    p.add_argument("--gaps-csv", action="store_true",
                   help="also write per-gap records (desk scale only)")
    p.set_defaults(func=cmd_scan)

    p = sub.add_parser("series", help="exceptional-gap proportion series")
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--stride", type=int, default=1)
    p.set_defaults(func=cmd_series)

    p = sub.add_parser("omega", help="residue class sets and c_h table")
    p.add_argument("--h-max", type=int, default=18)
    p.set_defaults(func=cmd_omega)

    p = sub.add_parser("constants", help="analytic constants with radii")
    p.add_argument("--H", type=int, default=1000)
    p.add_argument("--z", type=int, default=100)
    p.set_defaults(func=cmd_constants)

    p = sub.add_parser("singular", help="singular series of a tuple")
    p.add_argument("tuple", type=int, nargs="+")
    p.add_argument("--z", type=int, default=None, help="also report the truncation below z")
    p.set_defaults(func=cmd_singular)

    p = sub.add_parser("montgomery", help="Montgomery average sums")
    p.add_argument("--w", type=int, required=True)
    p.set_defaults(func=cmd_montgomery)

    p = sub.add_parser("paircorr", help="empirical pair correlation of rough numbers")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--h-max", type=int, default=100)
    p.set_defaults(func=cmd_paircorr)

    p = sub.add_parser("moments", help="window-count histogram moments")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--H", type=int, required=True)
    p.add_argument("--z", type=int, required=True)
    p.add_argument("--k-max", type=int, default=6)
    p.set_defaults(func=cmd_moments)

    p = sub.add_parser("nh", help="N_h decay against c_h * integral")
    p.add_argument("--X", type=int, required=True)
    p.add_argument("--h-max", type=int, default=30)
    p.add_argument("--ch-max", type=int, default=18,
                   help="largest h for which c_h is computed (DFS cost grows fast)")
    p.set_defaults(func=cmd_nh)

    p = sub.add_parser("check", help="run the acceptance suite")
    p.add_argument("--profile", default="desk")
    p.set_defaults(func=cmd_check)
    return ap


def main(argv: list[str] | None = None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OverflowError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
