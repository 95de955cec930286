"""Timing harness for single proofs and whole bundles.

Absolute numbers depend on the machine; what carries over is the shape:
bundle size is affine in n, construction and verification grow linearly,
and a verification is far cheaper than a proof.
"""

from __future__ import annotations

import gc
import statistics
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass

from . import groth16
from .gadgets import poa_inputs, PoaInstance, PoaWitness, public_vector
from .protocol import FULL, AssetProofBundle, customer_verify, exchange_prove, snapshot_gen
from .rng import as_rng


@dataclass
class BundleRecord:
    n: int
    owned_pct: float
    owned: int
    construction_s: float
    verification_s: float
    bundle_bytes: int
    accepted: bool

    @property
    def bundle_mb(self) -> float:
        return self.bundle_bytes / 1e6


@dataclass
class SingleRecord:
    repeats: int
    construction_s: float
    verification_s: float
    proof_bytes_compressed: int
    proof_bytes_uncompressed: int


@contextmanager
def _quiet_gc():
    # same idea as timeit: a collection landing inside a short window skews it
    enabled = gc.isenabled()
    gc.collect()
    gc.disable()
    try:
        yield
    finally:
        if enabled:
            gc.enable()


def bench_single(keys, rng=None, repeats: int = 3) -> SingleRecord:
    """Mean time to prove and verify one full-circuit statement for an owned address."""
    rng = as_rng(rng).child("bench-single")
    crs = keys.crs[FULL]
    cs = keys.circuit(FULL)
    curve = keys.profile.inner
    vk = crs.vk
    vk.alpha_beta()  # cache warm-up, kept out of the timings
    prove_t = verify_t = 0.0
    proof = None
    for i in range(repeats):
        sub = rng.child(i)
        x = sub.child("key").nonzero(int(curve.order))
        r = sub.child("blind").nonzero(int(curve.order))
        inst = PoaInstance(curve.G * x, sub.child("balance").randbelow(10**15))
        with _quiet_gc():
            t0 = time.perf_counter()
            t = cs.generate_assignment(poa_inputs(inst, PoaWitness(x, 1, r)))
            proof = groth16.prove(crs, t, rng=sub.child("proof"))
            t1 = time.perf_counter()
            c = curve.pedersen_commit(inst.v, r)
            ok = groth16.verify(vk, public_vector(inst.y, inst.v, c), proof)
            t2 = time.perf_counter()
        if not ok:
            raise AssertionError("benchmark proof failed to verify")
        prove_t += t1 - t0
        verify_t += t2 - t1
    return SingleRecord(
        repeats,
        prove_t / repeats,
        verify_t / repeats,
        len(proof.to_bytes(True)),
        len(proof.to_bytes(False)),
    )


def bench_bundles(keys, ns=(10, 100), fractions=(0.25, 0.5, 0.75), rng=None, jobs: int = 1,
                  compressed: bool = False, verify_repeats: int = 3) -> list:
    """Prove and verify one bundle per ``(n, fraction)``; returns :class:`BundleRecord` rows.

    Machine speed drifts over a long run, which matters when a short n=10
    timing is compared with a long n=100 one.  So, per fraction, bundles are
    proved in the order 10, 100, 10 (smaller sizes on both sides of the
    largest) and the times averaged.  Verification runs in interleaved
    rounds, each sample repeating a small bundle until it covers as many
    entries as the largest one; the median sample is reported.  Bundles are
    uncompressed by default, matching the 192-byte proofs of the single row.
    """
    rng = as_rng(rng).child("bench-bundles")
    vks = keys.verifying()
    for vk in vks.vks.values():
        vk.alpha_beta()
    ns = sorted(ns)
    order = ns + ns[-2::-1]
    cases = {}
    for f in fractions:
        for n in order:
            if (n, f) not in cases:
                sub = rng.child("%d/%s" % (n, f))
                anon, secrets = snapshot_gen(n, f, sub.child("snapshot"), keys.profile)
                cases[n, f] = [anon, secrets, sub.child("prove"), None, []]
            anon, secrets, prove_rng, first, times = cases[n, f]
            with _quiet_gc():
                t0 = time.perf_counter()
                bundle = exchange_prove(keys, anon, secrets, prove_rng, jobs=jobs, compressed=compressed)
                times.append(time.perf_counter() - t0)
            if first is None:
                cases[n, f][3] = bundle.to_bytes()
            elif first != bundle.to_bytes():
                raise AssertionError("repeated bundle construction was not deterministic")
    # every verification sample covers about max(ns) entries, so short and
    # long bundles see the same stretch of machine time
    samples = {key: [] for key in cases}
    verdicts = {}
    bundles = {k: AssetProofBundle.from_bytes(c[3]) for k, c in cases.items()}
    for _ in range(max(1, verify_repeats)):
        for (n, f), case in cases.items():
            reps = max(1, ns[-1] // n)
            with _quiet_gc():
                t0 = time.perf_counter()
                for _ in range(reps):
                    ok = bool(customer_verify(vks, case[0], bundles[n, f]))
                    verdicts[n, f] = verdicts.get((n, f), True) and ok
                samples[n, f].append((time.perf_counter() - t0) / reps)
    rows = []
    for n in ns:
        for f in fractions:
            anon, secrets, _, data, times = cases[n, f]
            rows.append(BundleRecord(n, 100 * f, len(secrets.owned), sum(times) / len(times),
                                     statistics.median(samples[n, f]),
                                     len(data), verdicts[n, f]))
    return rows


def format_single(rec: SingleRecord) -> str:
    lines = [
        "%-26s %s" % ("Parameter", "Value"),
        "%-26s %.4f sec" % ("Proof construction time", rec.construction_s),
        "%-26s %.4f sec" % ("Verification time", rec.verification_s),
        "%-26s %d bytes (%d compressed)" % ("Proof size", rec.proof_bytes_uncompressed, rec.proof_bytes_compressed),
    ]
    return "\n".join(lines)


def format_bundles(rows) -> str:
    head = "%6s %8s %8s %14s %14s %12s %7s" % ("n", "own %", "|S_own|", "construct (s)", "verify (s)",
                                                "size (MB)", "result")
    out = [head, "-" * len(head)]
    for r in rows:
        out.append("%6d %8.0f %8d %14.3f %14.3f %12.5f %7s" % (
            r.n, r.owned_pct, r.owned, r.construction_s, r.verification_s, r.bundle_mb,
            "Accept" if r.accepted else "Reject"))
    return "\n".join(out)


def records(single: SingleRecord | None, rows) -> dict:
    """Machine-readable form of a benchmark run."""
    return {
        "single": asdict(single) if single is not None else None,
        "bundles": [dict(asdict(r), bundle_mb=r.bundle_mb) for r in rows],
    }
