"""``riglab`` command-line front end.

Every command prints one JSON report.  Exact rationals are ``"p/q"``
strings, certified reals ``{"lo", "hi"}`` objects; floats never appear.
Exit codes: 0 success, 2 configuration error, 3 computational error.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import json
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Optional

import numpy as np

from . import __version__
from .cfrac import CFExpansion, convergents
from .errors import ConfigError, PrefixTooShort, RiglabError
from .exact import CertifiedReal, format_rational, parse_rational
from .gp import example42_point, gp_partial_sum, lemma21_point, lemma22_point, superlacunary_point
from .ipset import count_fs, ip_defect_scalar
from .measure import (
    BitSeriesMeasure,
    CantorMartingaleMeasure,
    fourier_bitseries,
    fourier_cantor,
    ip_defect_measure,
    measure_from_json,
    window42,
)
from .odometer import eigen_cauchy_defect, identity_sweep
from .rankone import LevelSet, plan_from_sequence, rigidity_report
from .seq import IndexRule, SequencePrefix, SequenceSpec, classify, generate

SCHEMA_VERSION = 1
DEFAULT_PREC = 64
DEFAULT_CAP = 10 ** 7


class Context:
    """Loaded inputs of one run; file contents enter the config hash."""

    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.files: dict[str, Any] = {}
        self.csv_rows: list[tuple[Any, Any, Any]] = []

    @property
    def prec(self) -> int:
        return getattr(self.args, "prec", DEFAULT_PREC)

    @property
    def cap(self) -> int:
        return getattr(self.args, "cap", DEFAULT_CAP)

    @property
    def seed(self) -> int:
        return getattr(self.args, "seed", 0)

    def load(self, flag: str) -> Any:
        path = getattr(self.args, flag, None)
        if path is None:
            raise ConfigError(flag, f"--{flag} is required")
        try:
            doc = json.loads(Path(path).read_text())
        except OSError as exc:
            raise ConfigError(flag, f"cannot read {path}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise ConfigError(flag, f"invalid JSON in {path}: {exc.msg}") from None
        self.files[flag] = doc
        return doc

    def spec(self) -> SequenceSpec:
        return SequenceSpec.from_json(self.load("spec"))

    def prefix(self, n: int) -> SequencePrefix:
        return generate(self.spec(), n)


def _rat(text: str, field: str) -> Fraction:
    try:
        return parse_rational(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(field, str(exc)) from None


def _cert(x) -> dict:
    return x.to_json() if isinstance(x, CertifiedReal) else {"lo": format_rational(x), "hi": format_rational(x)}


def _prefix_reaching(spec: SequenceSpec, n: int, cap: int) -> SequencePrefix:
    """Shortest prefix whose last term is at least ``n``."""
    L = 1
    while True:
        prefix = generate(spec, L)
        if prefix.values[-1] >= n:
            return prefix
        if spec.max_length is not None and L >= spec.max_length:
            raise PrefixTooShort(f"the sequence never reaches {n}")
        if L >= cap:
            raise PrefixTooShort(f"no term reaches {n} within {cap} terms")
        L += 1


# ---------------------------------------------------------------------------
# commands


def cmd_seq_gen(ctx: Context) -> dict:
    prefix = ctx.prefix(ctx.args.n)
    for i, v in enumerate(prefix.values, start=1):
        ctx.csv_rows.append((i, v, v))
    return {"values": [str(v) for v in prefix.values]}


def cmd_seq_classify(ctx: Context) -> dict:
    prefix = ctx.prefix(ctx.args.n)
    report = classify(prefix, _rat(ctx.args.p, "p"), _rat(ctx.args.lam, "lambda"))
    return report.to_json()


def cmd_cfrac_denoms(ctx: Context) -> dict:
    cf = CFExpansion.from_json(ctx.load("cf"))
    conv = convergents(cf, ctx.args.n)
    n = len(conv.q)
    for i, q in enumerate(conv.q):
        ctx.csv_rows.append((i, q, q))
    return {
        "a": [str(x) for x in conv.a],
        "p": [str(x) for x in conv.p],
        "q": [str(x) for x in conv.q],
        "determinants": [str(conv.determinant(i)) for i in range(1, n)],
    }


def cmd_fs_count(ctx: Context) -> dict:
    prefix = _prefix_reaching(ctx.spec(), ctx.args.n, ctx.cap)
    res = count_fs(prefix, ctx.args.n, ctx.cap)
    return {"n": str(ctx.args.n), "count": str(res.count), "c": res.c}


def cmd_fs_defect(ctx: Context) -> dict:
    N, W = ctx.args.start, ctx.args.width
    prefix = ctx.prefix(N + W - 1)
    return {"defect": ip_defect_scalar(prefix, _rat(ctx.args.t, "t"), N, W).to_json()}


def cmd_gp_sum(ctx: Context) -> dict:
    prefix = ctx.prefix(ctx.args.n)
    rep = gp_partial_sum(prefix, _rat(ctx.args.t, "t"), _rat(ctx.args.p, "p"), ctx.args.n)
    return rep.to_json()


def _lemma21_default(n_max: int) -> tuple[SequencePrefix, list[int]]:
    """``a_n = 2`` except ``a_{3k} = 3**k``."""
    nk = list(range(3, n_max + 1, 3))
    quotients = [3 ** (n // 3) if n % 3 == 0 else 2 for n in range(2, n_max + 1)]
    spec = SequenceSpec("multiplicative", IndexRule.explicit(quotients), (2,))
    return generate(spec, n_max), nk


def cmd_gp_point(ctx: Context) -> dict:
    kind, word = ctx.args.construction, ctx.args.word
    d = len(word)
    if kind == "lemma21":
        if ctx.args.spec:
            prefix = ctx.prefix(ctx.args.nmax)
            nk = ctx.args.nk or list(range(2, ctx.args.nmax + 1, 2))
        else:
            prefix, nk = _lemma21_default(ctx.args.nmax)
        return lemma21_point(prefix, nk, word, ctx.args.nmax).to_json()
    if kind == "lemma22":
        if ctx.args.cf:
            cf = CFExpansion.from_json(ctx.load("cf"))
        else:
            cf = CFExpansion(IndexRule.affine(0, 1))
        nk = ctx.args.nk or [1 << k for k in range(1, d + 2)]
        return lemma22_point(cf, nk, word, None, ctx.prec).to_json()
    if kind == "superlacunary":
        if ctx.args.spec:
            spec = ctx.spec()
        else:
            spec = SequenceSpec("multiplicative", IndexRule.affine(11, 1), (1,))
        length = ctx.args.nmax
        prefix = generate(spec, length)
        return superlacunary_point(prefix, word, _rat(ctx.args.p, "p")).to_json()
    if kind == "example42":
        prefix = generate(SequenceSpec("factorial-products", IndexRule.affine(1, 1)), d + 1)
        return example42_point(prefix, word).to_json()
    raise ConfigError("construction", f"unknown construction {kind!r}")  # pragma: no cover


def cmd_rankone_report(ctx: Context) -> dict:
    plan_doc = ctx.load("plan")
    if not isinstance(plan_doc, dict) or "sequence" not in plan_doc:
        raise ConfigError("plan", "plan needs a 'sequence' object")
    spec = SequenceSpec.from_json(plan_doc["sequence"])
    cap = plan_doc.get("cap", ctx.cap)
    if not isinstance(cap, int) or isinstance(cap, bool) or cap < 1:
        raise ConfigError("cap", "cap must be a positive integer")
    length = plan_doc.get("n") or spec.max_length
    if length is None:
        length = ctx.args.nmax + 1
    plan = plan_from_sequence(generate(spec, int(length)), cap)
    A = LevelSet.from_json(ctx.load("levels"))
    rep = rigidity_report(plan, A, ctx.args.nmax, _rat(ctx.args.p, "p"))
    for n, e, u in zip(rep.n_values, rep.enclosures, rep.upper):
        lo = e.lo if e is not None else Fraction(0)
        ctx.csv_rows.append((n, format_rational(lo), format_rational(u)))
    return {"plan": plan.to_json(), "levels": {"stage": A.stage, "levels": list(A.levels)}, "report": rep.to_json()}


def cmd_measure_fourier(ctx: Context) -> dict:
    mu = measure_from_json(ctx.load("measure"))
    m = ctx.args.m
    if isinstance(mu, BitSeriesMeasure):
        z = fourier_bitseries(mu, m, ctx.prec)
    else:
        z = fourier_cantor(mu, m, ctx.prec)
    return {"m": str(m), "coefficient": z.to_json()}


def cmd_measure_defect(ctx: Context) -> dict:
    mu = measure_from_json(ctx.load("measure"))
    N, W = ctx.args.start, ctx.args.width
    if isinstance(mu, CantorMartingaleMeasure) and ctx.args.spec is None:
        prefix = mu.prefix
    else:
        prefix = ctx.prefix(N + W - 1)
    return {"defect": ip_defect_measure(mu, prefix, N, W, ctx.prec).to_json()}


def cmd_measure_window42(ctx: Context) -> dict:
    rep = window42(_rat(ctx.args.lam, "lambda"), ctx.args.nmin, ctx.args.nmax, ctx.prec)
    for row in rep.rows:
        ctx.csv_rows.append((row.N, format_rational(row.defect.lo), format_rational(row.defect.hi)))
    return rep.to_json()


def cmd_odometer_check(ctx: Context) -> dict:
    prefix = ctx.prefix(ctx.args.len)
    return identity_sweep(prefix, ctx.args.len).to_json()


def cmd_odometer_eigen(ctx: Context) -> dict:
    N, W = ctx.args.start, ctx.args.width
    prefix = ctx.prefix(N + W - 1)
    rep = eigen_cauchy_defect(prefix, _rat(ctx.args.t, "t"), N, W, ctx.args.p)
    for i, x in enumerate(rep.partials):
        ctx.csv_rows.append((N + i, format_rational(x.lo), format_rational(x.hi)))
    return rep.to_json()


# ---------------------------------------------------------------------------
# parser


def _globals_parser() -> argparse.ArgumentParser:
    g = argparse.ArgumentParser(add_help=False)
    S = argparse.SUPPRESS
    g.add_argument("--prec", type=int, default=S, help="working precision in bits (default 64)")
    g.add_argument("--seed", type=int, default=S, help="seed for stochastic commands")
    g.add_argument("--cap", type=int, default=S, help="materialization cap")
    g.add_argument("--json", dest="json_path", default=S, help="also write the report here")
    g.add_argument("--csv", dest="csv_path", default=S, help="write plot series (index, value_lo, value_hi)")
    g.add_argument("--timing", action="store_true", default=S, help="include wall time in the report")
    return g


def build_parser() -> argparse.ArgumentParser:
    g = _globals_parser()
    parser = argparse.ArgumentParser(prog="riglab", description="Certified computations for rigidity sequences.", parents=[g])
    parser.add_argument("--version", action="version", version=f"riglab {__version__}")
    top = parser.add_subparsers(dest="group", required=True)

    def group(name: str, help: str):
        p = top.add_parser(name, help=help)
        return p.add_subparsers(dest="action", required=True)

    def leaf(sub, name: str, fn: Callable[[Context], dict], help: str):
        p = sub.add_parser(name, help=help, parents=[g])
        p.set_defaults(fn=fn)
        return p

    seq = group("seq", "sequence generation and classification")
    p = leaf(seq, "gen", cmd_seq_gen, "generate b_1..b_n")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p = leaf(seq, "classify", cmd_seq_classify, "classify a prefix")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--p", default="1")
    p.add_argument("--lambda", dest="lam", default="2")

    cfr = group("cfrac", "continued fractions")
    p = leaf(cfr, "denoms", cmd_cfrac_denoms, "convergents p_n/q_n")
    p.add_argument("--cf", required=True)
    p.add_argument("--n", type=int, required=True)

    fs = group("fs", "finite-sum sets")
    p = leaf(fs, "count", cmd_fs_count, "count distinct subset sums up to n")
    p.add_argument("--spec", required=True)
    p.add_argument("--n", type=int, required=True)
    p = leaf(fs, "defect", cmd_fs_defect, "window defect of a point")
    p.add_argument("--spec", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--width", type=int, required=True)

    gp = group("gp", "summability groups")
    p = leaf(gp, "sum", cmd_gp_sum, "partial sum of ||b_n t||^p")
    p.add_argument("--spec", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--p", required=True)
    p.add_argument("--n", type=int, required=True)
    p = leaf(gp, "point", cmd_gp_point, "construct a certified point")
    p.add_argument("--construction", required=True, choices=["lemma21", "lemma22", "superlacunary", "example42"])
    p.add_argument("--word", required=True)
    p.add_argument("--spec")
    p.add_argument("--cf")
    p.add_argument("--nk", type=int, nargs="+")
    p.add_argument("--nmax", type=int, default=40)
    p.add_argument("--p", default="1")

    r1 = group("rankone", "cutting-and-stacking towers")
    p = leaf(r1, "report", cmd_rankone_report, "rigidity report for a level set")
    p.add_argument("--plan", required=True)
    p.add_argument("--levels", required=True)
    p.add_argument("--nmax", type=int, required=True)
    p.add_argument("--p", default="1")

    ms = group("measure", "singular measures")
    p = leaf(ms, "fourier", cmd_measure_fourier, "Fourier coefficient")
    p.add_argument("--measure", required=True)
    p.add_argument("--m", type=int, required=True)
    p = leaf(ms, "defect", cmd_measure_defect, "window defect of a measure")
    p.add_argument("--measure", required=True)
    p.add_argument("--spec")
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p = leaf(ms, "window42", cmd_measure_window42, "defects along lambda-windows")
    p.add_argument("--lambda", dest="lam", default="13/10")
    p.add_argument("--nmin", type=int, default=10)
    p.add_argument("--nmax", type=int, default=20)

    od = group("odometer", "dyadic odometer diagnostics")
    p = leaf(od, "check", cmd_odometer_check, "exhaustive identity sweep")
    p.add_argument("--spec", required=True)
    p.add_argument("--len", type=int, required=True)
    p = leaf(od, "eigen", cmd_odometer_eigen, "eigenfunction Cauchy defect")
    p.add_argument("--spec", required=True)
    p.add_argument("--t", required=True)
    p.add_argument("--start", type=int, required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--p", type=int, default=2, choices=[1, 2])
    return parser


def _config_echo(args: argparse.Namespace, files: dict) -> dict:
    flags = {k: v for k, v in sorted(vars(args).items()) if k not in ("fn", "json_path", "csv_path", "timing")}
    return {"flags": flags, "files": files}


def _assert_exact(obj: Any, path: str = "results") -> None:
    if isinstance(obj, float):
        raise TypeError(f"float literal at {path}")
    if isinstance(obj, dict):
        for k, v in obj.items():
            _assert_exact(v, f"{path}.{k}")
    elif isinstance(obj, (list, tuple)):
        for i, v in enumerate(obj):
            _assert_exact(v, f"{path}[{i}]")


def _json_default(o):
    if isinstance(o, Fraction):
        return format_rational(o)
    if isinstance(o, np.integer):
        return int(o)
    raise TypeError(f"not serializable: {type(o).__name__}")


def run(argv: Optional[list[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    ctx = Context(args)
    start = time.perf_counter()
    try:
        if ctx.prec < 8:
            raise ConfigError("prec", "precision must be at least 8 bits")
        if ctx.cap < 1:
            raise ConfigError("cap", "cap must be positive")
        results = args.fn(ctx)
    except ConfigError as exc:
        print(f"riglab: config error in '{exc.field}': {exc}", file=err)
        return 2
    except RiglabError as exc:
        print(f"riglab: {type(exc).__name__}: {exc}", file=err)
        return 3
    echo = _config_echo(args, ctx.files)
    canonical = json.dumps(echo, sort_keys=True, default=_json_default, separators=(",", ":"))
    report = {
        "schema_version": SCHEMA_VERSION,
        "command": ["riglab"] + argv,
        "config_hash": hashlib.sha256(canonical.encode()).hexdigest(),
        "seed": ctx.seed,
        "results": results,
    }
    _assert_exact(results)
    if getattr(args, "timing", False):
        report["wall_time"] = f"{time.perf_counter() - start:.6f}s"
    text = json.dumps(report, indent=2, sort_keys=True, default=_json_default) + "\n"
    out.write(text)
    json_path = getattr(args, "json_path", None)
    if json_path:
        Path(json_path).write_text(text)
    csv_path = getattr(args, "csv_path", None)
    if csv_path:
        with open(csv_path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(["index", "value_lo", "value_hi"])
            for row in ctx.csv_rows:
                w.writerow([str(x) for x in row])
    return 0


def main() -> None:
    sys.exit(run())
