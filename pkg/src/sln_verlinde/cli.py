"""Command line front end: ``verlinde <command> [flags]``.

Exit codes: 0 success, 1 usage error, 2 numeric guard failure, 3 verification mismatch.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass

from .exact import format_rational
from .series import TruncationError
from .verlinde import (
    DEFAULT_PRECISION,
    RoundingGuardError,
    VerificationError,
    residue_matrix,
    verlinde_polynomial,
    verlinde_sum,
)

EXIT_OK, EXIT_USAGE, EXIT_GUARD, EXIT_MISMATCH = 0, 1, 2, 3
COMMANDS = ("sum", "poly", "matrix", "fusion", "mzv", "rr-check", "verify-all")


class UsageError(Exception):
    pass


@dataclass
class Output:
    """One result in three renderings."""

    json: object
    header: list | None = None
    rows: list | None = None
    text: str = ""


@dataclass
class RunConfig:
    command: str
    n: int | None
    g: int | None
    k: list | None
    level: int | None
    precision_bits: int
    truncation: list | None
    eval: list | None
    format: str
    out: str | None


def parse_k_range(text: str) -> list[int]:
    """``7`` or ``2..5`` (inclusive)."""
    try:
        if ".." in text:
            a, b = text.split("..")
            ks = list(range(int(a), int(b) + 1))
        else:
            ks = [int(text)]
    except ValueError:
        raise UsageError(f"bad level range {text!r}") from None
    if not ks:
        raise UsageError(f"empty level range {text!r}")
    return ks


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",")]
    except ValueError:
        raise UsageError(f"expected comma separated integers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="verlinde", description="Verlinde numbers and the objects built around them.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--n", type=int, help="group SL_n")
    p.add_argument("--g", type=int, help="genus")
    p.add_argument("--k", help="level k, or an inclusive range a..b")
    p.add_argument("--level", type=int, help="fusion level l (k = l + n)")
    p.add_argument("--precision-bits", type=int, default=None)
    p.add_argument("--truncation", help="per-variable truncation override, e.g. 4 or 3,7")
    p.add_argument("--eval", help="levels at which to evaluate a polynomial (k or a..b)")
    p.add_argument("--format", choices=("json", "csv", "text"), default="json")
    p.add_argument("--out", help="output file (default stdout)")
    return p


def make_config(argv) -> RunConfig:
    a = build_parser().parse_args(argv)
    prec = a.precision_bits
    if prec is None:
        env = os.environ.get("VERLINDE_PRECISION_BITS")
        try:
            prec = int(env) if env else DEFAULT_PRECISION
        except ValueError:
            raise UsageError(f"VERLINDE_PRECISION_BITS must be an integer, got {env!r}") from None
    if prec < 64:
        raise UsageError("precision must be at least 64 bits")
    return RunConfig(
        command=a.command,
        n=a.n,
        g=a.g,
        k=parse_k_range(a.k) if a.k else None,
        level=a.level,
        precision_bits=prec,
        truncation=_int_list(a.truncation) if a.truncation else None,
        eval=parse_k_range(a.eval) if a.eval else None,
        format=a.format,
        out=a.out,
    )


def _need(cfg, *names):
    missing = [f"--{x}" for x in names if getattr(cfg, x) is None]
    if missing:
        raise UsageError(f"{cfg.command} needs {', '.join(missing)}")


# ------------------------------------------------------------------ commands


def cmd_sum(cfg: RunConfig):
    _need(cfg, "n", "g", "k")
    if cfg.n < 2 or cfg.g < 0 or min(cfg.k) < 2:
        raise UsageError("need n >= 2, g >= 0 and k >= 2")
    rows = []
    for k in cfg.k:
        try:
            rows.append([k, str(verlinde_sum(cfg.n, k, cfg.g, cfg.precision_bits))])
        except RoundingGuardError as exc:
            raise RoundingGuardError(f"k={k}: {exc}") from exc
    js = {"n": cfg.n, "g": cfg.g, "values": [{"k": k, "value": v} for k, v in rows]}
    text = "\n".join(f"V_{k}(SL{cfg.n}, g={cfg.g}) = {v}" for k, v in rows)
    return Output(js, ["k", "value"], rows, text), EXIT_OK


def cmd_poly(cfg: RunConfig):
    _need(cfg, "n", "g")
    if cfg.n < 2 or cfg.g < 2:
        raise UsageError("the level polynomial needs n >= 2 and g >= 2")
    P = verlinde_polynomial(cfg.n, cfg.g)
    js = P.to_json()
    if cfg.eval:
        vals = [[k, format_rational(P(k))] for k in cfg.eval]
        js["evaluations"] = [{"k": k, "value": v} for k, v in vals]
        text = "\n".join(f"V({k}) = {v}" for k, v in vals)
        return Output(js, ["k", "value"], vals, f"V(k) = {P}\n{text}"), EXIT_OK
    rows = [[i, format_rational(c)] for i, c in enumerate(P.coefficients())]
    return Output(js, ["power", "value"], rows, f"V(k) = {P}"), EXIT_OK


def cmd_matrix(cfg: RunConfig):
    _need(cfg, "g", "k")
    if len(cfg.k) != 1:
        raise UsageError("matrix takes a single level")
    k = cfg.k[0]
    if k < 2 or cfg.g < 2:
        raise UsageError("matrix needs k >= 2 and g >= 2")
    M = residue_matrix(k, cfg.g, cfg.precision_bits)
    js = {"k": k, "g": cfg.g, "rows": [[str(x) for x in r] for r in M.rows()]}
    header = [f"c{j}" for j in range(k)]
    width = max(len(str(x)) for r in M.rows() for x in r)
    text = "\n".join(" ".join(str(x).rjust(width) for x in r) for r in M.rows())
    return Output(js, header, M.rows(), text), EXIT_OK


def cmd_fusion(cfg: RunConfig):
    from .fusion import build_fusion, format_weight, fusion_coefficients, genus_correlator
    from .verlinde import guarded_round

    _need(cfg, "n", "level")
    if cfg.n not in (2, 3) or cfg.level < 0:
        raise UsageError("fusion needs n in {2, 3} and level >= 0")
    F = build_fusion(cfg.n, cfg.level, cfg.precision_bits)
    N = fusion_coefficients(F)
    js = N.to_json()
    rows = [
        [format_weight(a), format_weight(b), format_weight(c), str(N.table[(a, b, c)])]
        for a in F.weights for b in F.weights for c in F.weights
    ]
    lines = [f"{a} * {b} -> {c}: {m}" for a, b, c, m in rows if m != "0"]
    if cfg.g is not None:
        v = guarded_round(genus_correlator(F, cfg.g))
        js["correlator"] = {"g": cfg.g, "value": str(v)}
        lines.append(f"genus {cfg.g} correlator = {v}")
    return Output(js, ["a", "b", "c", "multiplicity"], rows, "\n".join(lines)), EXIT_OK


def cmd_mzv(cfg: RunConfig):
    from .witten_zeta import mzv_bernoulli, mzv_residue

    _need(cfg, "g")
    if cfg.g < 1:
        raise UsageError("mzv needs g >= 1")
    b = mzv_bernoulli(cfg.g)
    r = mzv_residue(cfg.g)
    if r != b.coefficient:
        raise VerificationError(f"residue route {format_rational(r)} differs from {b}")
    js = b.to_json()
    row = [format_rational(b.coefficient), b.pi_power]
    text = f"S({2 * cfg.g},{2 * cfg.g},{2 * cfg.g}) = {format_rational(b.coefficient)} * pi^{b.pi_power}"
    return Output(js, ["coefficient", "pi_power"], [row], text), EXIT_OK


def cmd_rr(cfg: RunConfig):
    from .intersection import (
        IntersectionQuery,
        RiemannRochReport,
        ahat_series,
        intersection_pairing,
        riemann_roch_check,
        wick_rotate,
    )
    from .verlinde import LevelPolynomial

    _need(cfg, "n", "g")
    if cfg.n not in (2, 3) or not 2 <= cfg.g <= 5:
        raise UsageError("rr-check needs n in {2, 3} and 2 <= g <= 5")
    if cfg.truncation:
        T = cfg.truncation * (cfg.n - 1) if len(cfg.truncation) == 1 else cfg.truncation
        if len(T) != cfg.n - 1:
            raise UsageError("one truncation per Cartan variable")
        P = wick_rotate(ahat_series(cfg.n, cfg.g, T).series)
        Q = intersection_pairing(IntersectionQuery(cfg.n, cfg.g, P, level_shift=cfg.n))
        V = verlinde_polynomial(cfg.n, cfg.g)
        rep = RiemannRochReport(cfg.n, cfg.g, Q, LevelPolynomial(cfg.n, cfg.g, V.poly.shift(cfg.n)))
    else:
        rep = riemann_roch_check(cfg.n, cfg.g)
    rows = []
    deg = max(rep.pairing.degree, rep.shifted_verlinde.degree)
    for i in range(deg + 1):
        rows.append([i, format_rational(rep.pairing.poly.coefficient(i)),
                     format_rational(rep.shifted_verlinde.poly.coefficient(i))])
    text = f"Q(k)      = {rep.pairing}\nV(k + {cfg.n}) = {rep.shifted_verlinde}\nidentity holds: {rep.ok}"
    return Output(rep.to_json(), ["power", "pairing", "shifted_verlinde"], rows, text), (
        EXIT_OK if rep.ok else EXIT_MISMATCH
    )


def cmd_verify_all(cfg: RunConfig):
    from .acceptance import run_all

    results = run_all(cfg.precision_bits)
    hard_ok = all(r.ok for r in results if not r.advisory)
    js = {
        "ok": hard_ok,
        "checks": [
            {"criterion": r.number, "title": r.title, "ok": r.ok, "advisory": r.advisory,
             "seconds": f"{r.seconds:.3f}", "detail": r.detail}
            for r in results
        ],
    }
    rows = [[r.number, r.title, r.ok, r.advisory, r.detail] for r in results]
    text = "\n".join(r.line() for r in results)
    return Output(js, ["criterion", "title", "ok", "advisory", "detail"], rows, text), (
        EXIT_OK if hard_ok else EXIT_MISMATCH
    )


HANDLERS = {
    "sum": cmd_sum,
    "poly": cmd_poly,
    "matrix": cmd_matrix,
    "fusion": cmd_fusion,
    "mzv": cmd_mzv,
    "rr-check": cmd_rr,
    "verify-all": cmd_verify_all,
}


def render(out: Output, fmt: str) -> str:
    if fmt == "json":
        return json.dumps(out.json, indent=2) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(out.header)
        w.writerows(out.rows)
        return buf.getvalue()
    return out.text + "\n"


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    try:
        cfg = make_config(argv)
        out, code = HANDLERS[cfg.command](cfg)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RoundingGuardError, TruncationError) as exc:
        print(f"numeric guard failure: {exc}", file=sys.stderr)
        return EXIT_GUARD
    except VerificationError as exc:
        print(f"verification mismatch: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    text = render(out, cfg.format)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
