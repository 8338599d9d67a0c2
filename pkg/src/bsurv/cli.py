"""Command line interface: ``bsurv <command> [options]``.

Single queries print JSON, sweeps print CSV.  Exit codes: 0 success, 1 domain
error, 2 resource or precision failure, 64 usage error.

Bases are given as a decimal (read exactly), ``p/q``, or ``seq:<pre>:<per>``
for the base whose expansion of 1 is the given eventually periodic sequence.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
from dataclasses import dataclass, fields, replace
from fractions import Fraction
from typing import List, Optional

from .errors import DomainError, ParseError, PrecisionError, ResourceError
from .expansions import (
    DEFAULT_EPS,
    ValueEnclosure,
    alpha_prefix,
    alpha_seq,
    eval_pi,
    float_down,
    float_up,
    greedy_seq,
    parse_beta,
    parse_real,
)
from .sequences import PeriodicSeq, as_word, format_word, parse_word

EXIT_OK, EXIT_DOMAIN, EXIT_PRECISION, EXIT_USAGE = 0, 1, 2, 64
CSV_HEADER = "# bsurv-csv v1"


@dataclass(frozen=True)
class Config:
    eps: Fraction = DEFAULT_EPS
    depth: int = 8
    cap: int = 40
    n_max: int = 40
    horizon: int = 10 ** 4
    format: Optional[str] = None

    def validated(self) -> "Config":
        for name in ("depth", "cap", "n_max", "horizon"):
            if getattr(self, name) <= 0:
                raise DomainError(f"{name} must be positive")
        if not 0 < self.eps < Fraction(1, 2 ** 20):
            raise DomainError("eps must lie in (0, 2^-20)")
        if self.format not in (None, "json", "csv", "text"):
            raise DomainError(f"unknown format {self.format!r}")
        return self

    def to_dict(self):
        return {"eps": str(self.eps), "depth": self.depth, "cap": self.cap,
                "n_max": self.n_max, "horizon": self.horizon, "format": self.format}


def _coerce(name: str, value: str):
    if name == "eps":
        return parse_real(value)
    if name == "format":
        return value
    return int(value)


def load_config(path: str) -> dict:
    out = {}
    names = {f.name for f in fields(Config)}
    with open(path) as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise DomainError(f"{path}:{lineno}: expected key=value")
            key, value = (p.strip() for p in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in names:
                raise DomainError(f"{path}:{lineno}: unknown key {key!r}")
            out[key] = _coerce(key, value)
    return out


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _pair(x: ValueEnclosure):
    return x.pair()


def _beta_pair(b):
    return [float_down(b.lo), float_up(b.hi)]


def _seq_or_real(text: str):
    """``seq:<pre>:<per>`` gives a PeriodicSeq, anything else an exact rational."""
    if text.startswith("seq:"):
        return PeriodicSeq.parse(text[4:])
    return parse_real(text)


# commands -------------------------------------------------------------------

def cmd_farey(args, cfg):
    from .words import farey_level
    words = [format_word(w) for w in farey_level(args.level)]
    if (cfg.format or "text") == "text":
        return " ".join(words)
    return {"level": args.level, "words": words}


def cmd_word(args, cfg):
    from .substitution import is_lambda_e, lambda_decompose
    from .words import (is_extended_farey, is_farey, is_lyndon, is_lyndon_e, is_palindrome,
                        largest_cyclic, lmr_decompose, smallest_cyclic)
    w = as_word(args.w)
    if not w:
        raise DomainError("empty word")
    out = {"word": format_word(w), "largest_rotation": format_word(largest_cyclic(w)),
           "smallest_rotation": format_word(smallest_cyclic(w)), "lyndon": is_lyndon(w),
           "lyndon_e": is_lyndon_e(w), "palindrome": is_palindrome(w),
           "farey": is_farey(w), "extended_farey": is_extended_farey(w)}
    out["lmr"] = lmr_decompose(w) if out["farey"] else None
    out["lambda_e"] = is_lambda_e(w)
    out["coding"] = [format_word(c) for c in lambda_decompose(w)] if out["lambda_e"] else None
    return out


def cmd_sub(args, cfg):
    from .substitution import bullet, phi_apply, phi_parse
    s = as_word(args.s)
    if args.parse is not None:
        x = _parse_seq_or_word(args.parse)
        res = phi_parse(s, x)
        return {"s": format_word(s), "input": str(x) if isinstance(x, PeriodicSeq) else format_word(x),
                "preimage": str(res) if isinstance(res, PeriodicSeq) else format_word(res)}
    if args.r is None:
        raise DomainError("give --r or --parse")
    r = _parse_seq_or_word(args.r)
    out = {"s": format_word(s), "r": str(r) if isinstance(r, PeriodicSeq) else format_word(r)}
    img = phi_apply(s, r)
    out["phi"] = str(img) if isinstance(img, PeriodicSeq) else format_word(img)
    if not isinstance(r, PeriodicSeq):
        out["bullet"] = format_word(bullet(s, r))
    return out


def _parse_seq_or_word(text: str):
    return PeriodicSeq.parse(text) if ":" in text else parse_word(text)


def cmd_alpha(args, cfg):
    beta = parse_beta(args.beta, cfg.eps)
    out = {"beta": _beta_pair(beta)}
    if args.t is not None:
        t = parse_real(args.t)
        seq = greedy_seq(t, beta) if beta.is_point else None
        out["t"] = [float_down(t), float_up(t)]
        out["greedy"] = str(seq) if seq is not None else None
        return out
    seq = alpha_seq(beta)
    out["quasi_greedy_one"] = str(seq) if seq is not None else None
    out["prefix"] = format_word(alpha_prefix(beta, args.n))
    return out


def cmd_pi(args, cfg):
    beta = parse_beta(args.beta, cfg.eps)
    seq = PeriodicSeq.parse(args.seq)
    return {"beta": _beta_pair(beta), "seq": str(seq),
            "value": _pair(eval_pi(beta, seq, check_alphabet=False))}


def cmd_classify(args, cfg):
    from .intervals import classify
    beta = parse_beta(args.beta, cfg.eps)
    cl = classify(beta, cfg.depth, cfg.cap)
    return {"beta": _beta_pair(beta), **cl.to_dict(beta)}


def cmd_tau(args, cfg):
    from .critical import tau
    beta = parse_beta(args.beta, cfg.eps)
    r = tau(beta, cfg.depth, cfg.cap)
    return {"beta": _beta_pair(beta), **r.to_dict(beta)}


def _exact_str(x: Fraction) -> str:
    # finite decimal when there is one, else p/q
    q = x.denominator
    n = 0
    while q % 2 == 0 or q % 5 == 0:
        q //= 2 if q % 2 == 0 else 5
        n += 1
    if q != 1:
        return str(x)
    digits = str(abs(x.numerator) * 10 ** n // x.denominator).rjust(n + 1, "0")
    sign = "-" if x < 0 else ""
    head, tail = digits[:len(digits) - n], digits[len(digits) - n:].rstrip("0")
    return sign + head + ("." + tail if tail else "")


def cmd_staircase(args, cfg):
    from .critical import check_staircase, staircase
    rows = staircase(args.from_, args.to, args.step, cfg.depth, cfg.cap, jobs=args.jobs)
    if args.check:
        summary = check_staircase(rows)
        summary["failures"] = [[kind, str(b)] for kind, b in summary["failures"]]
        print(json.dumps(summary), file=sys.stderr)
    if cfg.format == "json":
        return {"rows": [{"beta": _exact_str(b), "tau": [float_down(lo), float_up(hi)] if lo is not None else None,
                          "case": case, "coding": coding} for b, lo, hi, case, coding, _ in rows]}
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        fh.write(CSV_HEADER + "\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["beta", "tau_lo", "tau_hi", "case", "coding"])
        for b, lo, hi, case, coding, _ in rows:
            w.writerow([_exact_str(b), repr(float_down(lo)) if lo is not None else "",
                        repr(float_up(hi)) if hi is not None else "", case, coding])
    finally:
        if args.out:
            fh.close()
    return None


def cmd_dim(args, cfg):
    from .survivor import dim_survivor
    beta = parse_beta(args.beta, cfg.eps)
    t = _seq_or_real(args.t)
    r = dim_survivor(beta, t, cfg.n_max)
    out = {"beta": _beta_pair(beta), **r.to_dict()}
    out["dim_lo"], out["dim_hi"] = r.dim_lo, r.dim_hi
    v = out.pop("value")
    out["dim_point"] = [v, v] if v is not None else None
    return out


def cmd_ebeta(args, cfg):
    from .survivor import bifurcation_member
    beta = parse_beta(args.beta, cfg.eps)
    t = _seq_or_real(args.t)
    r = bifurcation_member(beta, t, cfg.horizon)
    return {"beta": _beta_pair(beta), "t": str(t), **r.to_dict()}


def cmd_isolated(args, cfg):
    from .survivor import isolated_construction, isolated_test
    beta = parse_beta(args.beta, cfg.eps)
    if args.s is not None:
        s = as_word(args.s)
        return {"beta": _beta_pair(beta), "s": format_word(s), "isolated": isolated_test(s, beta)}
    pts = isolated_construction(beta, args.count, horizon=cfg.horizon)
    return {"beta": _beta_pair(beta),
            "points": [{"s": format_word(p.s), "t": _pair(p.t), "in_interval": p.in_interval,
                        "member": p.member} for p in pts]}


def cmd_kl(args, cfg):
    from .critical import komornik_loreti
    beta, t, s1, pre = komornik_loreti(args.m, args.digits)
    return {"m": args.m, "beta": _beta_pair(beta), "tau": _pair(t), "s1": format_word(s1),
            "alpha_prefix": format_word(pre[:args.show])}


def cmd_holes(args, cfg):
    from .holes import HoleSystem, bridge, omega_automaton, sigma_automaton
    from .survivor import word_counts
    h = HoleSystem(args.k, _seq_or_real(args.a), _seq_or_real(args.b))
    res = bridge(h, cfg.eps)
    out = res.to_dict()
    out["counts_omega"] = word_counts(omega_automaton(h), args.n)
    sig = sigma_automaton(h)
    out["counts_sigma"] = word_counts(sig, args.n)
    return {"k": h.k, "a": str(h.a), "b": str(h.b), **out}


def cmd_endpoints(args, cfg):
    from .intervals import endpoints
    tr = endpoints(as_word(args.s), cfg.eps)
    return {"S": format_word(tr.S), "beta_l": _beta_pair(tr.beta_l),
            "beta_star": _beta_pair(tr.beta_star), "beta_r": _beta_pair(tr.beta_r)}


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    g = common.add_argument_group("configuration")
    g.add_argument("--config", help="file of key=value lines")
    g.add_argument("--eps", "--prec", dest="eps", help="bisection width for bases (default 2^-64)")
    g.add_argument("--depth", type=int, help="max number of coding words (default 8)")
    g.add_argument("--cap", type=int, help="max length of a coding word (default 40)")
    g.add_argument("--n-max", dest="n_max", type=int, help="truncation for entropy (default 40); dim also takes --n")
    g.add_argument("--horizon", type=int, help="orbit horizon (default 10^4)")
    g.add_argument("--format", choices=["json", "csv", "text"])

    p = _Parser(prog="bsurv", description=__doc__,
                formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    sp = add("farey", cmd_farey, "list the Farey words of level n")
    sp.add_argument("--level", type=int, required=True)
    sp = add("word", cmd_word, "rotations, Lyndon, Farey and L/M/R data for a word")
    sp.add_argument("--w", required=True)
    sp = add("sub", cmd_sub, "block substitution Phi_s(r), s . r, or its inverse")
    sp.add_argument("--s", required=True)
    sp.add_argument("--r", help="word or pre:per sequence")
    sp.add_argument("--parse", help="word or pre:per sequence to decode")
    sp = add("alpha", cmd_alpha, "quasi-greedy expansion of 1, or greedy expansion of t")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--n", "--digits", dest="n", type=int, default=32)
    sp.add_argument("--t")
    sp = add("pi", cmd_pi, "value of a pre:per digit sequence in base beta")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--seq", required=True)
    sp = add("classify", cmd_classify, "locate beta among basic, Farey and exceptional sets")
    sp.add_argument("--beta", required=True)
    sp = add("tau", cmd_tau, "certified critical value")
    sp.add_argument("--beta", required=True)
    sp = add("staircase", cmd_staircase, "critical value on a grid, as CSV")
    sp.add_argument("--from", dest="from_", required=True)
    sp.add_argument("--to", required=True)
    sp.add_argument("--step", required=True)
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--check", action="store_true", help="print monotonicity/convexity summary to stderr")
    sp.add_argument("--out", help="write CSV here instead of stdout")
    sp = add("dim", cmd_dim, "dimension of the survivor set")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--t", required=True, help="rational or seq:<pre>:<per> greedy expansion")
    sp.add_argument("--n", dest="n_max", type=int, help="same as --n-max")
    sp = add("ebeta", cmd_ebeta, "membership of t in the bifurcation set")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--t", required=True)
    sp = add("isolated", cmd_isolated, "isolated points of the bifurcation set")
    sp.add_argument("--beta", required=True)
    sp.add_argument("--count", type=int, default=3)
    sp.add_argument("--s", help="test the single Lyndon word s instead")
    sp = add("kl", cmd_kl, "generalized Komornik-Loreti constant beta_m")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--digits", type=int, default=256)
    sp.add_argument("--show", type=int, default=32)
    sp = add("holes", cmd_holes, "times-k map with k-1 translated holes")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--a", required=True)
    sp.add_argument("--b", required=True)
    sp.add_argument("--n", type=int, default=12, help="word-count length")
    sp = add("endpoints", cmd_endpoints, "beta_l, beta_star and beta_r for a word S")
    sp.add_argument("--s", required=True)
    return p


def _effective_config(args) -> Config:
    cfg = Config()
    if args.config:
        cfg = replace(cfg, **load_config(args.config))
    over = {}
    for f in fields(Config):
        v = getattr(args, f.name, None)
        if v is not None:
            over[f.name] = _coerce(f.name, v) if f.name == "eps" else v
    return replace(cfg, **over).validated()


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = _effective_config(args)
        out = args.func(args, cfg)
    except (DomainError, ParseError, ValueError, OSError) as exc:
        print(f"bsurv: error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (ResourceError, PrecisionError, RecursionError, MemoryError) as exc:
        print(f"bsurv: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_PRECISION
    if out is None:
        return EXIT_OK
    if isinstance(out, str):
        print(out)
    else:
        print(json.dumps({**out, "config": cfg.to_dict()}))
    return EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
