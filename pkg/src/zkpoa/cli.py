"""``zkpoa`` command-line tool.

Exit status: 0 success or Accept, 1 Reject (or a failed opening), 2 usage
error, 3 I/O or file-format error.
"""

from __future__ import annotations

import argparse
import json
import os
import secrets as _secrets
import sys
import time
from pathlib import Path

from . import __version__, bench, groth16
from .curves import load_profile
from .errors import CircuitMismatch, KeyMismatchError, PoAError
from .gadgets import MODES, PAPER, public_vector
from .protocol import (
    FULL,
    AnonymitySet,
    AssetProofBundle,
    ExchangeSecrets,
    Opening,
    PoaKeys,
    PoaVerifyingKeys,
    customer_verify,
    exchange_prove,
    open_aggregate,
    poa_setup,
    snapshot_gen,
)
from .rng import PrfRng

EXIT_OK = 0
EXIT_REJECT = 1
EXIT_USAGE = 2
EXIT_IO = 3

PK_FILE = "poa.pk"
VK_FILE = "poa.vk"
TRAPDOOR_FILE = "poa.trapdoor"
SNAPSHOT_FILE = "poa.snapshot"
SECRETS_FILE = "poa.secrets"
BUNDLE_FILE = "poa.bundle"
OPENING_FILE = "poa.opening"

PROFILE_ENV = "POA_CURVE_PROFILE"


class UsageError(Exception):
    pass


def _log(msg):
    print(msg, file=sys.stderr)


def _profile(args):
    name = args.profile or os.environ.get(PROFILE_ENV) or "standard"
    try:
        prof = load_profile(name)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if name == "toy":
        # 7-bit scalars cannot host 256-bit keys; the toy curve is for unit tests only
        raise UsageError("the toy profile cannot carry the proof-of-assets circuit; use it from the test suite")
    return prof


def _rng(args):
    if args.seed is None:
        seed = _secrets.token_hex(16)
        _log("seed: %s (pass --seed to reproduce this run)" % seed)
    else:
        seed = args.seed
    return PrfRng(seed)


def _read(path):
    return Path(path).read_bytes()


def _write(path, data: bytes, force: bool):
    path = Path(path)
    if path.exists() and not force:
        raise FileExistsError("%s exists (use --force to overwrite)" % path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(data)


def _outdir(args) -> Path:
    return Path(args.out) if args.out else Path(".")


def _load_keys(args, profile) -> PoaKeys:
    keys = PoaKeys.from_bytes(_read(args.pk))
    if keys.profile.name != profile.name:
        raise CircuitMismatch("proving key is for profile %r" % keys.profile.name)
    if args.mode and args.mode != keys.mode:
        raise CircuitMismatch("proving key was built for %s mode" % keys.mode)
    return keys


# -- subcommands ------------------------------------------------------------------------


def cmd_setup(args) -> int:
    profile = _profile(args)
    mode = args.mode or PAPER
    out = _outdir(args)
    targets = [out / PK_FILE, out / VK_FILE] + ([out / TRAPDOOR_FILE] if args.test_mode else [])
    if not args.force:
        for p in targets:
            if p.exists():
                raise FileExistsError("%s exists (use --force to overwrite)" % p)
    t0 = time.perf_counter()
    keys = poa_setup(mode, _rng(args), profile, test_mode=args.test_mode)
    _write(out / PK_FILE, keys.to_bytes(), args.force)
    _write(out / VK_FILE, keys.verifying().to_bytes(), args.force)
    if args.test_mode:
        _write(out / TRAPDOOR_FILE, keys.trapdoors_to_bytes(), args.force)
    print("setup (%s) done in %.2f s" % (mode, time.perf_counter() - t0))
    for tag, h in sorted(keys.layout_hashes().items()):
        print("  circuit %d layout %s  constraints %d" % (tag, h.hex(), keys.crs[tag].cs.num_constraints))
    return EXIT_OK


def cmd_snapshot_gen(args) -> int:
    profile = _profile(args)
    if not 0 <= args.fraction <= 1:
        raise UsageError("--fraction must lie in [0, 1]")
    if args.n < 1:
        raise UsageError("--n must be positive")
    out = _outdir(args)
    anon, secrets = snapshot_gen(args.n, args.fraction, _rng(args), profile, args.max_balance)
    # post-generation audit: every key opens its address
    curve = profile.inner
    for i in secrets.owned:
        if curve.G * secrets.keys[i] != anon[i].y:
            raise KeyMismatchError("generated key %d does not open its address" % i)
    _write(out / SNAPSHOT_FILE, anon.to_bytes(), args.force)
    _write(out / SECRETS_FILE, secrets.to_bytes(), args.force)
    if args.text:
        _write(out / (SNAPSHOT_FILE + ".txt"), anon.to_text().encode(), args.force)
    print("snapshot %s: n=%d owned=%d" % (anon.hash.hex(), len(anon), len(secrets.owned)))
    return EXIT_OK


def cmd_prove(args) -> int:
    profile = _profile(args)
    keys = _load_keys(args, profile)
    anon = AnonymitySet.from_bytes(_read(args.snapshot))
    secrets = ExchangeSecrets.from_bytes(_read(args.secrets))
    if secrets.snapshot_hash != anon.hash:
        raise CircuitMismatch("secrets file belongs to a different snapshot")
    jobs = args.jobs or os.cpu_count() or 1
    t0 = time.perf_counter()
    bundle = exchange_prove(keys, anon, secrets, _rng(args), jobs=jobs, full_for_all=args.full_for_all,
                            compressed=not args.uncompressed)
    elapsed = time.perf_counter() - t0
    out = Path(args.out) if args.out else Path(BUNDLE_FILE)
    _write(out, bundle.to_bytes(), args.force)
    opening = Path(args.opening) if args.opening else out.with_suffix(".opening")
    _write(opening, bundle.opening.to_bytes(profile), args.force)
    print("bundle %s: n=%d, %d bytes" % (out, len(bundle), len(bundle.to_bytes())))
    print("proving time: total %.3f s, per address %.3f s (jobs=%d)" % (elapsed, elapsed / len(bundle), jobs))
    print("opening written to %s (keep it private)" % opening)
    return EXIT_OK


def cmd_verify(args) -> int:
    vks = PoaVerifyingKeys.from_bytes(_read(args.vk))
    anon = AnonymitySet.from_bytes(_read(args.snapshot))
    bundle = AssetProofBundle.from_bytes(_read(args.bundle))
    if args.mode and args.mode != vks.mode:
        raise CircuitMismatch("verifying key was built for %s mode" % vks.mode)
    t0 = time.perf_counter()
    verdict = customer_verify(vks, anon, bundle)
    print("%s  (%d entries, %.3f s)" % (verdict, len(bundle), time.perf_counter() - t0))
    return EXIT_OK if verdict else EXIT_REJECT


def cmd_open(args) -> int:
    bundle = AssetProofBundle.from_bytes(_read(args.bundle))
    opening = Opening.from_bytes(_read(args.opening))
    total = opening.total if args.total is None else args.total
    ok = open_aggregate(bundle, total, opening.blind_sum)
    print("opening with total %d: %s" % (total, "true" if ok else "false"))
    return EXIT_OK if ok else EXIT_REJECT


def cmd_simulate(args) -> int:
    profile = _profile(args)
    keys = _load_keys(args, profile)
    keys.attach_trapdoors(_read(args.trapdoor))
    anon = AnonymitySet.from_bytes(_read(args.snapshot))
    if not 0 <= args.index < len(anon):
        raise UsageError("--index out of range")
    rng = _rng(args)
    entry = anon[args.index]
    curve = profile.inner
    # any commitment at all: the simulator needs no witness
    c = curve.G * rng.child("commitment").nonzero(int(curve.order))
    public = public_vector(entry.y, entry.v, c)
    crs = keys.crs[FULL]
    proof = groth16.simulate(crs, public, rng.child("simulate"))
    ok = groth16.verify(crs.vk, public, proof)
    print(proof.armor())
    print("simulated proof for entry %d verifies: %s" % (args.index, "true" if ok else "false"))
    return EXIT_OK if ok else EXIT_REJECT


def _csv(kind):
    def parse(text):
        try:
            return [kind(t) for t in text.split(",") if t]
        except ValueError:
            raise argparse.ArgumentTypeError("expected a comma-separated list") from None
    return parse


def cmd_bench(args) -> int:
    profile = _profile(args)
    keys = _load_keys(args, profile)
    rng = _rng(args)
    jobs = args.jobs or 1
    single = bench.bench_single(keys, rng, args.repeats) if args.repeats else None
    rows = bench.bench_bundles(keys, args.n, args.fractions, rng, jobs=jobs)
    if single is not None:
        print(bench.format_single(single))
        print()
    print(bench.format_bundles(rows))
    if args.json:
        _write(args.json, json.dumps(bench.records(single, rows), indent=2).encode(), args.force)
    return EXIT_OK if all(r.accepted for r in rows) else EXIT_REJECT


# -- entry point --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--mode", choices=MODES, help="circuit mode (default paper-faithful)")
    common.add_argument("--profile", help="curve profile (overrides $%s)" % PROFILE_ENV)
    common.add_argument("--seed", help="seed for every random choice in this run")
    common.add_argument("--force", action="store_true", help="overwrite existing output files")
    common.add_argument("--out", help="output file or directory")

    p = argparse.ArgumentParser(prog="zkpoa", description="Zero-knowledge proof of assets.")
    p.add_argument("--version", action="version", version="%(prog)s " + __version__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("setup", parents=[common], help="trusted setup; writes poa.pk and poa.vk")
    s.add_argument("--test-mode", action="store_true", help="also keep the trapdoor in poa.trapdoor")
    s.set_defaults(func=cmd_setup)

    s = sub.add_parser("snapshot-gen", parents=[common], help="synthetic anonymity set and exchange secrets")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--fraction", type=float, required=True, help="share of addresses the exchange owns")
    s.add_argument("--max-balance", type=int, default=2_100_000_000_000_000)
    s.add_argument("--text", action="store_true", help="also write a line-delimited text copy")
    s.set_defaults(func=cmd_snapshot_gen)

    s = sub.add_parser("prove", parents=[common], help="build a proof bundle")
    s.add_argument("--pk", default=PK_FILE)
    s.add_argument("--snapshot", default=SNAPSHOT_FILE)
    s.add_argument("--secrets", default=SECRETS_FILE)
    s.add_argument("--opening", help="where to write the aggregate opening (default: next to the bundle)")
    s.add_argument("--jobs", type=int, help="worker processes (default: available cores)")
    s.add_argument("--full-for-all", action="store_true", help="hide ownership by using the full circuit everywhere")
    s.add_argument("--uncompressed", action="store_true", help="192-byte proofs instead of 128")
    s.set_defaults(func=cmd_prove)

    s = sub.add_parser("verify", parents=[common], help="check a bundle against a snapshot")
    s.add_argument("--vk", default=VK_FILE)
    s.add_argument("--snapshot", default=SNAPSHOT_FILE)
    s.add_argument("--bundle", default=BUNDLE_FILE)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("open", parents=[common], help="check a claimed total against the aggregate")
    s.add_argument("--bundle", default=BUNDLE_FILE)
    s.add_argument("--opening", default=OPENING_FILE)
    s.add_argument("--total", type=int, help="claimed total (default: the one in the opening file)")
    s.set_defaults(func=cmd_open)

    s = sub.add_parser("simulate", parents=[common], help="witness-free proof from the trapdoor (test mode)")
    s.add_argument("--pk", default=PK_FILE)
    s.add_argument("--trapdoor", default=TRAPDOOR_FILE)
    s.add_argument("--snapshot", default=SNAPSHOT_FILE)
    s.add_argument("--index", type=int, default=0)
    s.set_defaults(func=cmd_simulate)

    s = sub.add_parser("bench", parents=[common], help="timing and size report")
    s.add_argument("--pk", default=PK_FILE)
    s.add_argument("--n", type=_csv(int), default=[10, 100])
    s.add_argument("--fractions", type=_csv(float), default=[0.25, 0.5, 0.75])
    s.add_argument("--repeats", type=int, default=3, help="single-proof repetitions (0 to skip)")
    s.add_argument("--jobs", type=int, default=1)
    s.add_argument("--json", help="also write machine-readable records here")
    s.set_defaults(func=cmd_bench)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        _log("zkpoa: error: %s" % exc)
        return EXIT_USAGE
    except (OSError, PoAError) as exc:
        _log("zkpoa: %s: %s" % (type(exc).__name__, exc))
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
