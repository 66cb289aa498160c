"""Command-line interface: ``lvmb <command> ...``; prints a JSON report, exits 0/1/2/3."""

from __future__ import annotations

import argparse
import hashlib
import sys
from datetime import datetime, timezone

from . import reports as R
from .errors import LvmbError
from .generate import GeneratorConfig
from .io import InputError, dumps, loads


def _read(path: str):
    """Parsed JSON and the sha256 digest of the raw file."""
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise InputError(f"{path}: not UTF-8 ({exc.reason} at byte {exc.start})") from None
    return loads(text, path), "sha256:" + hashlib.sha256(raw).hexdigest()


def _write(path: str, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(obj))


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lvmb", description=__doc__)
    p.add_argument("--deterministic", action="store_true",
                   help="omit the timestamp so reports are byte-identical across runs")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the LVMB conditions of a datum")
    s.add_argument("file")

    s = sub.add_parser("check-lvm", help="decide the LVM property")
    s.add_argument("file")
    s.add_argument("--method", choices=["bosio", "fan", "both"], default="both")

    s = sub.add_parser("to-fan", help="datum -> (subspace, fan)")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("from-fan", help="(subspace, fan) -> datum")
    s.add_argument("file")
    s.add_argument("-o", "--output", required=True)

    s = sub.add_parser("polytopal", help="polytopality of a complete simplicial fan")
    s.add_argument("file")

    s = sub.add_parser("equiv", help="affine equivalence of two data")
    s.add_argument("a")
    s.add_argument("b")

    s = sub.add_parser("gen", help="generate a seeded random datum")
    _gen_args(s)
    s.add_argument("--jitter", type=int, default=0,
                   help="redraw this many points keeping the family (may break imbrication)")
    s.add_argument("-o", "--output")

    s = sub.add_parser("batch", help="cross-check both LVM criteria over a seeded corpus")
    s.add_argument("--count", type=int, required=True)
    _gen_args(s)

    s = sub.add_parser("verify", help="re-check every certificate in a report")
    s.add_argument("file")
    return p


def _gen_args(s):
    s.add_argument("--m", type=int, required=True)
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=int, required=True)
    s.add_argument("--mutations", type=int, default=0)
    s.add_argument("--coord-bound", type=int, default=100)
    s.add_argument("--denominator-bound", type=int, default=100)


def _dispatch(args) -> R.Outcome:
    cmd = args.command
    if cmd == "gen":
        cfg = GeneratorConfig(args.m, args.n, args.seed, args.coord_bound,
                              args.denominator_bound, args.mutations, args.jitter)
        return R.run_gen(cfg)
    if cmd == "batch":
        if args.count < 0:
            raise InputError("--count must be nonnegative")
        GeneratorConfig(args.m, args.n, args.seed, args.coord_bound, args.denominator_bound,
                        args.mutations)
        return R.run_batch(args.count, args.m, args.n, args.seed, args.mutations)
    if cmd == "equiv":
        a, da = _read(args.a)
        b, db = _read(args.b)
        return R.run_equiv(a, b, f"{da},{db}")
    obj, digest = _read(args.file)
    if cmd == "validate":
        return R.run_validate(obj, digest)
    if cmd == "check-lvm":
        return R.run_check_lvm(obj, args.method, digest)
    if cmd == "to-fan":
        return R.run_to_fan(obj, digest)
    if cmd == "from-fan":
        return R.run_from_fan(obj, digest)
    if cmd == "polytopal":
        return R.run_polytopal(obj, digest)
    if cmd == "verify":
        return R.run_verify(obj, digest)
    raise AssertionError(cmd)


def run_command(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        out = _dispatch(args)
    except LvmbError as exc:
        out = R.Outcome(R.EXIT_INVALID, R.envelope(args.command, "invalid", R.jsonable(exc.certificate),
                                                   error=str(exc)))
    if out.output is not None and getattr(args, "output", None):
        _write(args.output, out.output)
    if not args.deterministic:
        out.report["timestamp"] = datetime.now(timezone.utc).isoformat()
    sys.stdout.write(dumps(out.report))
    return out.code


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
