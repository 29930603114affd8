"""Command-line frontend emitting machine-readable envelopes.

Every run prints one envelope: {command, parameters, results, engine_version}.
Integers are rendered as decimal strings (primorials overflow doubles
immediately), exact rationals as "num/den" strings, floats as shortest
round-trip decimals.  CSV emission carries the same values, one row per list
element, header mandatory.  Identical argv produces byte-identical output,
except for bench whose payload is wall-clock timing by design; verify prints
its throughput to stderr to keep the envelope deterministic.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import asdict, is_dataclass
from fractions import Fraction
from pathlib import Path

from . import __version__
from .counting import (
    asymptote_coefficient,
    counts_row,
    hardy_littlewood_constant,
    legendre_pi2,
    main_term,
    twin_prime_constant,
)
from .classify import classify, nonranks_of
from .errors import CapacityError, DomainError
from .oracle import DEFAULT_CEILING, pi2_exact, twin_ranks_up_to, verify_classify
from .progressions import crt_family, nested_form, remnants_below, residue_set


def _encode(obj):
    """JSON-safe payload: ints to decimal strings, Fractions to 'num/den'."""
    if isinstance(obj, bool):
        return obj
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, float):
        return obj
    if isinstance(obj, (list, tuple)):
        return [_encode(v) for v in obj]
    if isinstance(obj, dict):
        return {k: _encode(v) for k, v in obj.items()}
    if is_dataclass(obj):
        return _encode(asdict(obj))
    if hasattr(obj, "tolist"):  # numpy array or scalar
        return _encode(obj.tolist())
    return obj


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (list, tuple)):
        return " ".join(str(x) for x in v)
    return str(v)


def _parse_primes(text: str) -> list[int]:
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise DomainError(f"cannot parse prime list {text!r}") from None


def _cache_path(cache_dir: str, level: int) -> Path:
    return Path(cache_dir) / f"constants-{level}.txt"


def _load_cached_constants(cache_dir: str, level: int):
    path = _cache_path(cache_dir, level)
    if not path.is_file():
        return None
    lines = path.read_text().splitlines()
    head = lines[0].split()
    if head[:1] != ["#"] or head[1] != f"level={level}":
        raise DomainError(f"cache file {path} does not match level {level}")
    modulus = int(head[2].removeprefix("modulus="))
    return modulus, [int(v) for v in lines[1:] if v]


def _store_cached_constants(cache_dir: str, level: int, modulus: int, constants) -> None:
    path = _cache_path(cache_dir, level)
    path.parent.mkdir(parents=True, exist_ok=True)
    body = f"# level={level} modulus={modulus}\n" + "\n".join(str(c) for c in constants) + "\n"
    tmp = path.with_suffix(".tmp")
    tmp.write_text(body)
    os.replace(tmp, path)


# Each handler returns (results_dict, csv_header, csv_rows).

def _cmd_classify(args):
    c = classify(args.m)
    results = {
        "m": c.m,
        "verdict": c.verdict,
        "parent": c.parent,
        "composite_sides": list(c.composite_sides),
        "witness_sign": c.witness_sign,
        "witness_kappa": c.witness_kappa,
    }
    header = ["m", "verdict", "parent", "composite_sides", "witness_sign", "witness_kappa"]
    row = [c.m, c.verdict, c.parent, c.composite_sides, c.witness_sign, c.witness_kappa]
    return results, header, [row]


def _cmd_twins(args):
    stream = twin_ranks_up_to(args.limit, ceiling=args.ceiling)
    results = {"limit": stream.limit, "count": len(stream.ranks), "ranks": list(stream.ranks)}
    return results, ["rank"], [[m] for m in stream.ranks]


def _cmd_nonranks(args):
    terms = nonranks_of(args.prime, args.limit)
    results = {
        "prime": args.prime,
        "limit": args.limit,
        "count": len(terms),
        "terms": [{"value": t.value, "n": t.n, "sign": t.sign} for t in terms],
    }
    return results, ["value", "n", "sign"], [[t.value, t.n, t.sign] for t in terms]


def _cmd_constants(args):
    cached = _load_cached_constants(args.cache_dir, args.level) if args.cache_dir else None
    if cached is not None:
        modulus, constants = cached
    else:
        rs = residue_set(args.level)
        modulus, constants = rs.modulus, rs.constants.tolist()
        if args.cache_dir:
            _store_cached_constants(args.cache_dir, args.level, modulus, constants)
    results = {
        "level": args.level,
        "modulus": modulus,
        "count": len(constants),
        "constants": constants,
    }
    return results, ["constant"], [[c] for c in constants]


def _cmd_remnants(args):
    rep = remnants_below(args.level, args.bound)
    intruder_parent = dict(rep.intruders)
    front = set(rep.front_twin_ranks)
    results = {
        "level": rep.p,
        "bound": rep.bound,
        "front_bound": rep.front_bound,
        "count": len(rep.remnants),
        "remnants": list(rep.remnants),
        "front_twin_ranks": list(rep.front_twin_ranks),
        "intruders": [{"value": v, "parent": q} for v, q in rep.intruders],
    }
    rows = []
    for v in rep.remnants:
        kind = "front_twin_rank" if v in front else ("intruder" if v in intruder_parent else "twin_rank")
        rows.append([v, kind, intruder_parent.get(v)])
    return results, ["value", "kind", "parent"], rows


def _cmd_family(args):
    primes = _parse_primes(args.primes)
    fam = crt_family(primes, workers=args.workers)
    members = []
    rows = []
    for fm in fam.members:
        entry = {"signs": "".join(fm.signs), "residue": fm.residue}
        row = [entry["signs"], fm.residue]
        if args.nested is not None:
            try:
                outer_index = fam.primes.index(args.nested)
            except ValueError:
                raise DomainError(f"--nested {args.nested} is not one of the family primes") from None
            nf = nested_form(fam.primes, fm.signs, fm.residue, outer_index)
            entry["nested"] = str(nf)
            row.append(str(nf))
        members.append(entry)
        rows.append(row)
    results = {
        "primes": list(fam.primes),
        "modulus": fam.modulus,
        "members": members,
    }
    header = ["signs", "residue"] + (["nested"] if args.nested is not None else [])
    return results, header, rows


def _cmd_counts(args):
    row = counts_row(args.level)
    results = {
        "level": row.p_j,
        "L": row.L,
        "G": row.G,
        "q": row.q,
        "S": row.S,
        "Q": row.Q,
        "R": row.R,
        "x_frac": row.x_frac,
    }
    header = ["level", "L", "G", "q", "S", "Q", "R", "x_frac"]
    return results, header, [[row.p_j, row.L, row.G, row.q, row.S, row.Q, row.R, row.x_frac]]


def _cmd_legendre(args):
    rep = legendre_pi2(args.level, ceiling=args.ceiling, workers=args.workers)
    results = {
        "level": rep.p_j,
        "p_next": rep.p_next,
        "M": rep.M,
        "x": rep.x,
        "R0": rep.R0,
        "ie_sum": rep.ie_sum,
        "estimate": rep.estimate,
        "oracle_pi2": rep.oracle_pi2,
        "oracle_window": rep.oracle_window,
        "residual_pi2": rep.residual_pi2,
        "residual_window": rep.residual_window,
    }
    header = list(results)
    return results, header, [[results[k] for k in header]]


def _cmd_mainterm(args):
    rep = main_term(args.level, workers=args.workers)
    results = {
        "level": rep.p_j,
        "x": rep.x,
        "R_M_sum": rep.R_M_sum,
        "R_M_sum_float": float(rep.R_M_sum),
        "R_M_product": rep.R_M_product,
        "R_M_product_float": float(rep.R_M_product),
        "form_gap": rep.R_M_product - rep.R_M_sum,
        "R_E": rep.R_E,
        "asymptote": rep.asymptote,
    }
    header = list(results)
    return results, header, [[results[k] for k in header]]


def _cmd_c2(args):
    c2 = twin_prime_constant(args.tol)
    results = {
        "tolerance": args.tol,
        "c2": c2,
        "hardy_littlewood": hardy_littlewood_constant(args.tol),
        "asymptote_coefficient": asymptote_coefficient(args.tol),
    }
    header = list(results)
    return results, header, [[results[k] for k in header]]


def _cmd_verify(args):
    rep = verify_classify(args.limit, workers=args.workers, ceiling=args.ceiling)
    print(
        f"verify: {rep.limit} ranks in {rep.elapsed_s:.2f}s ({rep.ranks_per_s:.0f}/s)",
        file=sys.stderr,
    )
    results = {
        "limit": rep.limit,
        "mismatch_count": len(rep.mismatches),
        "mismatches": [list(t) for t in rep.mismatches],
        "twin_ranks": rep.twin_ranks,
        "non_ranks": rep.non_ranks,
    }
    header = ["limit", "mismatch_count", "twin_ranks", "non_ranks"]
    return results, header, [[rep.limit, len(rep.mismatches), rep.twin_ranks, rep.non_ranks]]


def _cmd_bench(args):
    t0 = time.perf_counter()
    pi2 = pi2_exact(args.limit, ceiling=args.ceiling)
    sieve_s = time.perf_counter() - t0
    sample = min(args.limit // 6, 20_000)
    t0 = time.perf_counter()
    for m in range(1, sample + 1):
        classify(m)
    classify_s = time.perf_counter() - t0
    results = {
        "limit": args.limit,
        "pi2": pi2,
        "sieve_seconds": sieve_s,
        "classify_sample": sample,
        "classify_seconds": classify_s,
        "classify_per_second": sample / classify_s if classify_s > 0 else float("inf"),
    }
    header = list(results)
    return results, header, [[results[k] for k in header]]


_HANDLERS = {
    "classify": _cmd_classify,
    "twins": _cmd_twins,
    "nonranks": _cmd_nonranks,
    "constants": _cmd_constants,
    "remnants": _cmd_remnants,
    "family": _cmd_family,
    "counts": _cmd_counts,
    "legendre": _cmd_legendre,
    "mainterm": _cmd_mainterm,
    "c2": _cmd_c2,
    "verify": _cmd_verify,
    "bench": _cmd_bench,
}


def _add_global_flags(parser: argparse.ArgumentParser, *, suppress: bool) -> None:
    # On the root parser the flags carry real defaults; on subparsers they
    # default to SUPPRESS so a flag given before the subcommand survives.
    def dflt(value):
        return argparse.SUPPRESS if suppress else value

    parser.add_argument("--emit", choices=("json", "csv"), default=dflt("json"))
    parser.add_argument("--out", default=dflt(None), help="write the envelope to this path")
    parser.add_argument("--ceiling", type=int, default=dflt(DEFAULT_CEILING), help="oracle sieve ceiling")
    parser.add_argument("--cache-dir", default=dflt(None), help="memoize residue sets under this directory")
    parser.add_argument("--workers", type=int, default=dflt(1), help="worker processes for partitionable work")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twinsieve", description="Twin-rank sieve engine with machine-readable output."
    )
    _add_global_flags(parser, suppress=False)
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text)
        _add_global_flags(p, suppress=True)
        return p

    p = command("classify", "twin rank or non-rank with parent prime")
    p.add_argument("m", type=int)
    p = command("twins", "twin ranks up to a limit")
    p.add_argument("--limit", type=int, required=True)
    p = command("nonranks", "non-rank values of one prime")
    p.add_argument("--prime", type=int, required=True)
    p.add_argument("--limit", type=int, required=True)
    p = command("constants", "admissible residue classes at a level")
    p.add_argument("--level", type=int, required=True)
    p = command("remnants", "value-level remnants below a bound")
    p.add_argument("--level", type=int, required=True)
    p.add_argument("--bound", type=int, required=True)
    p = command("family", "simultaneous non-rank progressions of several primes")
    p.add_argument("--primes", required=True, help="comma-separated, e.g. 5,7,11")
    p.add_argument("--nested", type=int, default=None, help="also emit nested forms with this prime outermost")
    p = command("counts", "exact per-period counts at a level")
    p.add_argument("--level", type=int, required=True)
    p = command("legendre", "inclusion-exclusion estimate with oracle residuals")
    p.add_argument("--level", type=int, required=True)
    p = command("mainterm", "exact main-term forms and the asymptote")
    p.add_argument("--level", type=int, required=True)
    p = command("c2", "twin prime constant from the truncated product")
    p.add_argument("--tol", type=float, default=1e-6)
    p = command("verify", "replay classify against the sieve oracle")
    p.add_argument("--limit", type=int, required=True)
    p = command("bench", "time the oracle sieve and the classifier")
    p.add_argument("--limit", type=int, required=True)
    return parser


def _emit_json(envelope: dict) -> str:
    return json.dumps(envelope, sort_keys=True, indent=2, separators=(",", ": ")) + "\n"


def _emit_csv(header: list[str], rows: list[list]) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(_cell(v) for v in row))
    return "\n".join(lines) + "\n"


def _write_output(text: str, out_path: str | None) -> None:
    if out_path is None:
        sys.stdout.write(text)
        return
    tmp = f"{out_path}.tmp"
    with open(tmp, "w") as fh:
        fh.write(text)
    os.replace(tmp, out_path)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = _HANDLERS[args.command]
    try:
        results, header, rows = handler(args)
    except (DomainError, CapacityError) as exc:
        print(f"twinsieve {args.command}: {exc}", file=sys.stderr)
        return 1
    if args.emit == "json":
        parameters = {
            k: v
            for k, v in vars(args).items()
            if k not in ("command", "emit", "out", "cache_dir") and v is not None
        }
        envelope = {
            "command": args.command,
            "parameters": _encode(parameters),
            "results": _encode(results),
            "engine_version": __version__,
        }
        text = _emit_json(envelope)
    else:
        text = _emit_csv(header, rows)
    _write_output(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
