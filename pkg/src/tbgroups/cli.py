"""Command-line entry point.

Subcommands: analyze-sbox, verify-cipher, group, enumerate-subgroups,
check-layer, random-cipher.  Reports go to stdout as JSON; diagnostics to
stderr.  Exit codes: 0 all checks pass, 1 a check fails, 2 input or
budget error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .algebra import EnumerationTooLarge, FieldSpec, VSpace, enumerate_subgroups, gaussian_binomial
from .cipher import SBox, TbCipherSpec
from .corpus import DEFAULT_SEED, random_toy_cipher
from .mixing_analysis import BudgetExceeded, is_proper_mixing_layer
from .report import analyze_sbox, group_report, verify_cipher

log = logging.getLogger("tbgroups")

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class InputError(ValueError):
    pass


def _emit(doc) -> None:
    # written once, at completion
    sys.stdout.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    sys.stdout.flush()


def _read_ints(path: str) -> list[int]:
    try:
        return [int(x) for x in Path(path).read_text().split()]
    except ValueError as exc:
        raise InputError(f"{path}: malformed integer table ({exc})") from None


def _parse_budget(text: str | None) -> dict:
    if not text:
        return {}
    out = {}
    for item in text.split(","):
        key, _, val = item.partition("=")
        if not val:
            raise InputError(f"budget entries look like key=value, got {item!r}")
        out[key.strip()] = float(val) if "." in val else int(val)
    return out


def load_spec(path: str) -> TbCipherSpec:
    try:
        return TbCipherSpec.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from None


def cmd_analyze_sbox(args) -> int:
    field = FieldSpec.parse(args.field)
    table = _read_ints(args.table)
    try:
        f = SBox(tuple(table), field.p)
    except ValueError as exc:
        raise InputError(f"{args.table}: {exc}") from None
    if not f.fixes_zero:
        log.warning("S-box does not fix 0; it cannot be a tb brick, the checks are still defined")
    rep = analyze_sbox(f, delta=args.delta, r=args.r)
    rep["field"] = str(field)
    _emit(rep)
    return EXIT_OK if rep["passes"] else EXIT_FAIL


def cmd_verify_cipher(args) -> int:
    c = load_spec(args.spec)
    rep = verify_cipher(c, r=args.r, skip_group=args.skip_group,
                        budget=_parse_budget(args.budget), cipher_id=args.id or Path(args.spec).stem,
                        group_method=args.group_method)
    for item in rep["omitted"]:
        log.warning("omitted: %s", item)
    _emit(rep)
    return EXIT_OK if rep["all_checks_pass"] else EXIT_FAIL


def read_generators(path: str) -> list[list[int]]:
    gens = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), 1):
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        try:
            img = [int(x) for x in line.split()]
        except ValueError:
            raise InputError(f"{path}:{lineno}: not an integer list") from None
        if sorted(img) != list(range(len(img))):
            raise InputError(f"{path}:{lineno}: not a permutation of 0..{len(img) - 1}")
        gens.append(img)
    if not gens:
        raise InputError(f"{path}: no generators")
    if len({len(g) for g in gens}) != 1:
        raise InputError(f"{path}: generators have different degrees")
    return gens


def cmd_group(args) -> int:
    rep, _, _ = group_report(read_generators(args.generators),
                             budget_degree=_parse_budget(args.budget).get("bsgs_degree", 2**16),
                             method=args.group_method)
    _emit(rep)
    return EXIT_OK


def cmd_enumerate_subgroups(args) -> int:
    max_dim = args.e if args.max_dim is None else args.max_dim
    if args.count_only:
        count = sum(gaussian_binomial(args.e, k, args.p) for k in range(args.min_dim, max_dim + 1))
        _emit({"p": args.p, "e": args.e, "min_dim": args.min_dim, "max_dim": max_dim, "count": count})
        return EXIT_OK
    subs = [w.row_points() for w in enumerate_subgroups(args.e, args.p, args.min_dim, max_dim,
                                                        budget_bits=args.budget_bits)]
    _emit({"p": args.p, "e": args.e, "min_dim": args.min_dim, "max_dim": max_dim,
           "count": len(subs), "subgroups": subs})
    return EXIT_OK


def cmd_check_layer(args) -> int:
    c = load_spec(args.spec)
    reps = [is_proper_mixing_layer(r.layer).to_dict() for r in c.rounds]
    h = c.proper_round()
    _emit({"proper_round": h, "rounds": reps})
    return EXIT_OK if reps[h]["proper_layer"] else EXIT_FAIL


def cmd_random_cipher(args) -> int:
    rng = np.random.default_rng(args.seed)
    space = VSpace(FieldSpec.parse(args.field), args.m, args.n)
    c = random_toy_cipher(rng, space, args.bricks, args.layer)
    _emit(c.to_dict())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="tbgroups", description=__doc__.splitlines()[0])
    ap.add_argument("--version", action="version", version=__version__)
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("analyze-sbox", help="weak uniformity, anti-invariance and coset checks")
    s.add_argument("table", help="whitespace-separated S-box table, length p^m_p")
    s.add_argument("--field", default="2", help="field spec p^f/c0,..,cf (only p matters here)")
    s.add_argument("--delta", type=int)
    s.add_argument("--r", type=int)
    s.set_defaults(func=cmd_analyze_sbox)

    s = sub.add_parser("verify-cipher", help="full hypothesis and group analysis of a cipher spec")
    s.add_argument("spec", help="cipher spec JSON")
    s.add_argument("--r", type=int)
    s.add_argument("--skip-group", action="store_true")
    s.add_argument("--budget", help="e.g. bsgs_degree=4096,subgroup_bits=12")
    s.add_argument("--id")
    s.add_argument("--group-method", choices=["auto", "bsgs"], default="auto",
                   help="auto: Jordan certificate for giant groups, else BSGS")
    s.set_defaults(func=cmd_verify_cipher)

    s = sub.add_parser("group", help="order, transitivity, primitivity, Alt/Sym class")
    s.add_argument("generators", help="one permutation per line as an image list")
    s.add_argument("--budget")
    s.add_argument("--group-method", choices=["auto", "bsgs"], default="auto")
    s.set_defaults(func=cmd_group)

    s = sub.add_parser("enumerate-subgroups", help="list F_p-subspaces of F_p^e")
    s.add_argument("--p", type=int, required=True)
    s.add_argument("--e", type=int, required=True)
    s.add_argument("--min-dim", type=int, default=0)
    s.add_argument("--max-dim", type=int)
    s.add_argument("--budget-bits", type=float, default=16)
    s.add_argument("--count-only", action="store_true")
    s.set_defaults(func=cmd_enumerate_subgroups)

    s = sub.add_parser("check-layer", help="proper mixing layer test for every round")
    s.add_argument("spec")
    s.set_defaults(func=cmd_check_layer)

    s = sub.add_parser("random-cipher", help="emit a seeded random one-round toy cipher spec")
    s.add_argument("--field", default="2")
    s.add_argument("--m", type=int, default=3)
    s.add_argument("--n", type=int, default=2)
    s.add_argument("--bricks", choices=["random", "linear", "identity"])
    s.add_argument("--layer", choices=["random", "proper", "identity", "block_diagonal"])
    s.add_argument("--seed", type=int, default=DEFAULT_SEED)
    s.set_defaults(func=cmd_random_cipher)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    log.addHandler(handler)
    log.setLevel(logging.INFO if args.verbose else logging.WARNING)
    log.propagate = False
    try:
        return args.func(args)
    except (InputError, EnumerationTooLarge, BudgetExceeded, ValueError, KeyError, OSError) as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    finally:
        log.removeHandler(handler)


if __name__ == "__main__":
    sys.exit(main())
