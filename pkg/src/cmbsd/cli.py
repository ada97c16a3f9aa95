"""Command-line front end: verify, sweep, gross, lvalue, periods."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

import mpmath

from . import bsd
from .cm import NoCMError, UnsupportedCMError, hecke_character
from .curve import CurveParseError, minimal_model, parse_curve
from .lfun import curve_l_value, equivariant_l_value, terms_for_eps
from .periods import PeriodData, equivariant_period, neron_real_period, period_lattice
from .qfield import class_group

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_UNRECOGNIZED = 2
EXIT_FAIL = 3

SWEEP_MAX = 10**4


@dataclass(frozen=True)
class Config:
    prec_bits: int = 128
    denom_bound: int = 10**4
    tail_eps: float = 2.0**-80
    threads: int = 1
    output: str = "json"

    def __post_init__(self):
        if self.prec_bits < 64:
            raise ValueError("--prec must be at least 64")
        if self.denom_bound < 1:
            raise ValueError("--denom-bound must be at least 1")
        if not 0 < self.tail_eps < 1:
            raise ValueError("--tail-eps must lie in (0, 1)")
        if self.threads < 1:
            raise ValueError("--threads must be at least 1")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--prec", type=int, default=argparse.SUPPRESS, help="working precision in bits (>= 64, default 128)")
    p.add_argument("--denom-bound", type=int, default=argparse.SUPPRESS, help="denominator bound for recognition in K")
    p.add_argument("--tail-eps", type=float, default=argparse.SUPPRESS, help="bound on the truncated L-series tail")
    p.add_argument("--threads", type=int, default=argparse.SUPPRESS, help="worker processes for sweeps")
    p.add_argument("--format", choices=("json", "csv", "text"), default=argparse.SUPPRESS)
    return p


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = argparse.ArgumentParser(prog="cmbsd", parents=[common],
                                 description="BSD checks for elliptic curves with complex multiplication.")
    sub = ap.add_subparsers(dest="cmd", required=True)
    v = sub.add_parser("verify", parents=[common], help="BSD verdict for one curve (over Q or over K)")
    v.add_argument("curve", help='"a1,a2,a3,a4,a6" or "a1,...,a6@K:D"')
    s = sub.add_parser("sweep", parents=[common], help="congruent number curves y^2 = x^3 - n^2 x")
    s.add_argument("n_min", type=int)
    s.add_argument("n_max", type=int)
    g = sub.add_parser("gross", parents=[common], help="Gross's Sha formula from supplied t-values")
    g.add_argument("p", type=int)
    g.add_argument("t_file", help="CSV lines class_index,t_value")
    lv = sub.add_parser("lvalue", parents=[common], help="L(E,1), or L(psi-bar,1) over K")
    lv.add_argument("curve")
    pe = sub.add_parser("periods", parents=[common], help="period lattice and Neron periods")
    pe.add_argument("curve")
    return ap


def _config(ns) -> Config:
    d = vars(ns)
    return Config(
        prec_bits=d.get("prec", 128),
        denom_bound=d.get("denom_bound", 10**4),
        tail_eps=d.get("tail_eps", 2.0**-80),
        threads=d.get("threads", 1),
        output=d.get("format", "json"),
    )


def _emit(obj, fmt: str, out) -> None:
    """Write a flat or nested dict as JSON, a two-column CSV, or key: value text."""
    if fmt == "json":
        out.write(json.dumps(obj, indent=2, sort_keys=True) + "\n")
        return
    flat = _flatten(obj)
    if fmt == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["key", "value"])
        w.writerows(flat)
    else:
        for k, v in flat:
            out.write(f"{k}: {v}\n")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        rows = []
        for k in obj:
            rows += _flatten(obj[k], f"{prefix}.{k}" if prefix else str(k))
        return rows
    if isinstance(obj, list):
        rows = []
        for i, x in enumerate(obj):
            rows += _flatten(x, f"{prefix}[{i}]")
        return rows
    return [(prefix, "" if obj is None else obj)]


def _verdict_code(verdict: str) -> int:
    return {
        bsd.PASS: EXIT_OK,
        bsd.NON_VERDICT: EXIT_OK,
        bsd.UNRECOGNIZED: EXIT_UNRECOGNIZED,
        bsd.UNSUPPORTED: EXIT_INPUT,
    }.get(verdict, EXIT_FAIL)


def cmd_verify(curve: str, cfg: Config, out=None) -> int:
    out = out or sys.stdout
    E = parse_curve(curve)
    if E.base is None:
        rep = bsd.verify_bsd_Q(E, cfg.prec_bits, tail_eps=cfg.tail_eps)
    else:
        rep = bsd.verify_bsd_equivariant_K(E, cfg.prec_bits, cfg.denom_bound, tail_eps=cfg.tail_eps)
    _emit(rep.to_json(), cfg.output, out)
    return _verdict_code(rep.verdict)


def cmd_sweep(n_min: int, n_max: int, cfg: Config, out=None, err=None) -> int:
    out, err = out or sys.stdout, err or sys.stderr
    if not 1 <= n_min <= n_max <= SWEEP_MAX:
        raise ValueError(f"need 1 <= n_min <= n_max <= {SWEEP_MAX}")
    results = bsd.congruent_sweep(n_min, n_max, cfg.prec_bits, cfg.threads, cfg.tail_eps)
    rows = [r for r, _ in results]
    summary = bsd.sweep_summary(rows)
    if cfg.output == "json":
        data = {
            "rows": [{"n": r.n, "verdict": r.verdict, "sha": r.sha, "w": r.w,
                      "sha_pred": r.sha_pred, "runtime_ms": r.runtime_ms} for r in rows],
            "summary": summary,
        }
        out.write(json.dumps(data, indent=2, sort_keys=True) + "\n")
    elif cfg.output == "csv":
        w = csv.writer(out, lineterminator="\n")
        w.writerow(["n", "verdict", "sha", "w", "runtime_ms"])
        for r in rows:
            w.writerow([r.n, r.verdict, "" if r.sha is None else r.sha, "" if r.w is None else r.w, r.runtime_ms])
    else:
        for r in rows:
            out.write(f"n={r.n} {r.verdict} sha={r.sha} w={r.w} ({r.runtime_ms} ms)\n")
    if cfg.output != "json":
        err.write("summary: " + ", ".join(f"{k}={v}" for k, v in summary.items()) + "\n")
    return EXIT_UNRECOGNIZED if summary[bsd.UNRECOGNIZED] else EXIT_OK


def cmd_gross(p: int, t_file: str, cfg: Config, out=None) -> int:
    out = out or sys.stdout
    with mpmath.workprec(cfg.prec_bits):
        t = bsd.read_t_values(t_file)
        h = class_group(-p).order if p > 0 and p % 8 == 7 else None
        if h is None:
            raise ValueError(f"{p} is not a prime congruent to 7 mod 8")
        if len(t) != h:
            raise ValueError(f"t-value file has {len(t)} rows, class number is {h}")
        res = bsd.gross_sha(bsd.gross_input(p, t))
        obj = {
            "p": p,
            "h": h,
            "value": mpmath.nstr(res.value, 30),
            "sha": res.rounded,
            "degenerate": res.degenerate,
        }
        model = bsd.gross_curve_model(p, cfg.prec_bits)
        if model.exact:
            obj["curve"] = model.curve.to_string()
            obj["j"], obj["m"], obj["n"] = model.j, model.m, model.n
        else:
            obj["curve_approx"] = [mpmath.nstr(model.a4, 30), mpmath.nstr(model.a6, 30)]
            obj["exact"] = False
    _emit(obj, cfg.output, out)
    return EXIT_OK


def cmd_lvalue(curve: str, cfg: Config, out=None) -> int:
    out = out or sys.stdout
    E = parse_curve(curve)
    chi = hecke_character(E)
    X = terms_for_eps(chi.curve_conductor, cfg.tail_eps)
    with mpmath.workprec(cfg.prec_bits):
        if E.base is None:
            L = curve_l_value(chi, cfg.prec_bits, X)
            label = "L(E,1)"
        else:
            L = equivariant_l_value(chi, cfg.prec_bits, X=X)
            label = "L(psi-bar,1)"
        obj = {"curve": curve, "N": chi.curve_conductor, "quantity": label, **L.to_json(), "terms": L.terms_used}
    _emit(obj, cfg.output, out)
    return EXIT_OK


def cmd_periods(curve: str, cfg: Config, out=None) -> int:
    out = out or sys.stdout
    E = minimal_model(parse_curve(curve))
    with mpmath.workprec(cfg.prec_bits):
        lat = period_lattice(E)
        obj = {
            "curve": E.to_string() if E.has_rational_coefficients() else curve,
            "w1": [mpmath.nstr(mpmath.re(lat.w1), 40), mpmath.nstr(mpmath.im(lat.w1), 40)],
            "w2": [mpmath.nstr(mpmath.re(lat.w2), 40), mpmath.nstr(mpmath.im(lat.w2), 40)],
        }
        if E.base is None:
            obj["components"] = lat.real_locus_components
            obj["omega_E"] = mpmath.nstr(neron_real_period(E), 40)
        else:
            pd: PeriodData = equivariant_period(E, denom_bound=cfg.denom_bound)
            obj.update(pd.to_json())
    _emit(obj, cfg.output, out)
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        cfg = _config(ns)
        with mpmath.workprec(cfg.prec_bits):
            if ns.cmd == "verify":
                return cmd_verify(ns.curve, cfg)
            if ns.cmd == "sweep":
                return cmd_sweep(ns.n_min, ns.n_max, cfg)
            if ns.cmd == "gross":
                return cmd_gross(ns.p, ns.t_file, cfg)
            if ns.cmd == "lvalue":
                return cmd_lvalue(ns.curve, cfg)
            return cmd_periods(ns.curve, cfg)
    except (CurveParseError, NoCMError, UnsupportedCMError, ValueError, OSError) as exc:
        print(f"cmbsd: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def run(argv) -> tuple[int, str]:
    """main() with stdout captured (for tests)."""
    buf = io.StringIO()
    old = sys.stdout
    sys.stdout = buf
    try:
        code = main(argv)
    finally:
        sys.stdout = old
    return code, buf.getvalue()


if __name__ == "__main__":
    sys.exit(main())
