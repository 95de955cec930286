"""Proof-of-assets roles: exchange-side bundle construction, customer-side verification.

For every address ``y_i`` in the anonymity set the exchange publishes a
Pedersen commitment ``c_i`` and a proof that ``c_i`` commits to ``s_i v_i``
where ``s_i = 1`` exactly when the exchange knows the key of ``y_i``.  The
point sum of all ``c_i`` commits to the total the exchange controls.

Addresses the exchange does not own are proven with a smaller circuit that
fixes ``s = 0``.  Each bundle entry records which circuit it used, so a
verifier learns how many addresses are owned (but not which balances they
hold unless balances are distinct).  ``full_for_all`` closes that leak at
the cost of running the full circuit on every entry.
"""

from __future__ import annotations

import hashlib
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from gmpy2 import mpz

from . import groth16
from .codec import Reader, Writer
from .curves import InnerPoint, load_profile
from .errors import CircuitMismatch, KeyMismatchError, ParseError, ShapeError, SubgroupError
from .gadgets import MAX_BALANCE, MODES, PAPER, PoaInstance, build_poa_circuit, public_vector
from .rng import PrfRng, as_rng

FULL = 0
COMMITMENT = 1
CIRCUIT_TAGS = (FULL, COMMITMENT)

FORMAT_VERSION = 1
SNAPSHOT_MAGIC = b"ZKSN"
SECRETS_MAGIC = b"ZKSK"
BUNDLE_MAGIC = b"ZKBD"
OPENING_MAGIC = b"ZKOP"
KEYS_MAGIC = b"ZKKS"
VKEYS_MAGIC = b"ZKVS"
TRAPDOORS_MAGIC = b"ZKTS"

DEFAULT_MAX_BALANCE = 2_100_000_000_000_000  # 21M coins in 1e-8 units


def _profile(profile):
    if profile is None or isinstance(profile, str):
        return load_profile(profile or "standard")
    return profile


def _check_version(rd: Reader):
    off = rd.offset
    v = rd.u16()
    if v != FORMAT_VERSION:
        raise ParseError("unsupported format version %d" % v, off)


def _read_profile(rd: Reader):
    off = rd.offset
    name = rd.text()
    try:
        return load_profile(name)
    except ValueError:
        raise ParseError("unknown curve profile %r" % name, off) from None


def _point_reader(curve):
    return lambda b, o: InnerPoint.from_bytes(curve, b, o)


# -- anonymity set ------------------------------------------------------------------


class AnonymitySet:
    """Ordered public snapshot of ``(address, balance)`` records."""

    def __init__(self, entries, profile=None):
        self.profile = _profile(profile)
        self.entries = tuple(entries)
        seen = set()
        for i, e in enumerate(self.entries):
            if e.y.is_identity() or not e.y.is_on_curve():
                raise ValueError("entry %d: address is not a valid curve point" % i)
            if e.y.xy in seen:
                raise ValueError("entry %d: duplicate address" % i)
            seen.add(e.y.xy)
        self._hash = None

    def __len__(self):
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def to_bytes(self) -> bytes:
        wr = Writer().raw(SNAPSHOT_MAGIC).u16(FORMAT_VERSION).text(self.profile.name).u32(len(self.entries))
        for e in self.entries:
            wr.raw(e.y.to_bytes(True)).u64(int(e.v))
        return wr.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "AnonymitySet":
        rd = Reader(data)
        rd.magic(SNAPSHOT_MAGIC, "snapshot")
        _check_version(rd)
        profile = _read_profile(rd)
        curve = profile.inner
        n = rd.u32()
        entries = []
        w = curve.coord_bytes + 1
        for _ in range(n):
            y = rd.element(_point_reader(curve), w)
            off = rd.offset
            v = rd.u64()
            if v > MAX_BALANCE:
                raise ParseError("balance out of range", off)
            entries.append(PoaInstance(y, v))
        rd.done()
        try:
            return cls(entries, profile)
        except ValueError as exc:
            raise ParseError(str(exc)) from None

    @property
    def hash(self) -> bytes:
        """Content address: SHA-256 of the canonical serialization."""
        if self._hash is None:
            self._hash = hashlib.sha256(self.to_bytes()).digest()
        return self._hash

    def to_text(self) -> str:
        """Line-delimited ``index address-hex balance`` records for inspection."""
        lines = ["# snapshot %s profile=%s n=%d" % (self.hash.hex(), self.profile.name, len(self))]
        for i, e in enumerate(self.entries):
            lines.append("%d %s %d" % (i, e.y.to_bytes(True).hex(), int(e.v)))
        return "\n".join(lines) + "\n"


@dataclass
class ExchangeSecrets:
    """Private keys for owned addresses, indexed like the snapshot (None = not owned)."""

    keys: list
    snapshot_hash: bytes
    profile: object = None

    def __post_init__(self):
        self.profile = _profile(self.profile)

    @property
    def owned(self) -> list:
        return [i for i, x in enumerate(self.keys) if x is not None]

    def as_map(self, anon: AnonymitySet) -> dict:
        return {anon[i].y.xy: x for i, x in enumerate(self.keys) if x is not None}

    def to_bytes(self) -> bytes:
        nb = self.profile.inner.coord_bytes
        wr = Writer().raw(SECRETS_MAGIC).u16(FORMAT_VERSION).text(self.profile.name)
        wr.raw(self.snapshot_hash).u32(len(self.keys))
        for x in self.keys:
            wr.u8(0 if x is None else 1).scalar(0 if x is None else x, nb)
        return wr.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "ExchangeSecrets":
        rd = Reader(data)
        rd.magic(SECRETS_MAGIC, "exchange-secrets")
        _check_version(rd)
        profile = _read_profile(rd)
        snap = rd.take(32)
        n = rd.u32()
        order = int(profile.inner.order)
        keys = []
        for _ in range(n):
            off = rd.offset
            flag = rd.u8()
            x = rd.scalar(profile.inner.coord_bytes, order)
            if flag not in (0, 1) or (flag == 0 and x):
                raise ParseError("bad secret record", off)
            keys.append(x if flag else None)
        rd.done()
        return cls(keys, snap, profile)


def snapshot_gen(n: int, owned_fraction: float, rng=None, profile=None, max_balance: int = DEFAULT_MAX_BALANCE):
    """Synthetic snapshot of ``n`` fresh keypairs with uniform balances.

    Returns ``(AnonymitySet, ExchangeSecrets)``; ``round(n * owned_fraction)``
    randomly chosen addresses are marked as owned.
    """
    if not 0 <= owned_fraction <= 1:
        raise ValueError("owned fraction must lie in [0, 1]")
    max_balance = min(int(max_balance), MAX_BALANCE)
    profile = _profile(profile)
    curve = profile.inner
    rng = as_rng(rng).child("snapshot")
    order = int(curve.order)
    keys, entries, seen = [], [], set()
    krng, brng = rng.child("keys"), rng.child("balances")
    while len(entries) < n:
        x = krng.nonzero(order)
        y = curve.G * x
        if y.xy in seen:
            continue
        seen.add(y.xy)
        keys.append(x)
        entries.append(PoaInstance(y, brng.randbelow(max_balance + 1)))
    k = int(n * owned_fraction + 0.5)
    pool = list(range(n))
    orng = rng.child("ownership")
    owned = set()
    for _ in range(k):  # partial Fisher-Yates
        j = orng.randbelow(len(pool))
        owned.add(pool.pop(j))
    anon = AnonymitySet(entries, profile)
    secrets = ExchangeSecrets([keys[i] if i in owned else None for i in range(n)], anon.hash, profile)
    return anon, secrets


# -- keys -------------------------------------------------------------------------------


class PoaKeys:
    """Proving keys for the full circuit and the commitment-only circuit."""

    def __init__(self, mode: str, crs: dict, profile=None):
        if mode not in MODES:
            raise ValueError("unknown circuit mode %r" % mode)
        self.mode = mode
        self.crs = crs
        self.profile = _profile(profile)
        self._circuits = {}

    def layout_hashes(self) -> dict:
        return {tag: c.layout_hash for tag, c in self.crs.items()}

    def circuit(self, tag: int):
        """Witness-capable circuit for ``tag``, rebuilt and checked against the key."""
        if tag not in self._circuits:
            cs = build_poa_circuit(self.mode, self.profile, commitment_only=(tag == COMMITMENT))
            if cs.layout_hash != self.crs[tag].layout_hash:
                raise CircuitMismatch("proving key does not match the %s circuit" % self.mode)
            self._circuits[tag] = cs
        return self._circuits[tag]

    def verifying(self) -> "PoaVerifyingKeys":
        return PoaVerifyingKeys(self.mode, {t: c.vk for t, c in self.crs.items()}, self.profile)

    @property
    def test_mode(self) -> bool:
        return all(c.trapdoor is not None for c in self.crs.values())

    def to_bytes(self) -> bytes:
        wr = Writer().raw(KEYS_MAGIC).u16(FORMAT_VERSION).text(self.profile.name).text(self.mode)
        wr.u8(len(self.crs))
        for tag in sorted(self.crs):
            wr.u8(tag).raw(self.crs[tag].layout_hash).blob(self.crs[tag].to_bytes())
        return wr.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "PoaKeys":
        rd = Reader(data)
        rd.magic(KEYS_MAGIC, "proving-key")
        _check_version(rd)
        profile = _read_profile(rd)
        off = rd.offset
        mode = rd.text()
        if mode not in MODES:
            raise ParseError("unknown circuit mode %r" % mode, off)
        crs = {}
        for _ in range(rd.u8()):
            off = rd.offset
            tag = rd.u8()
            if tag not in CIRCUIT_TAGS or tag in crs:
                raise ParseError("bad circuit tag %d" % tag, off)
            layout = rd.take(32)
            base = rd.offset + 4
            blob = rd.blob()
            try:
                c = groth16.Crs.from_bytes(blob)
            except ParseError as exc:
                raise ParseError(str(exc).split(" (at byte")[0], base + (exc.offset or 0)) from None
            if c.layout_hash != layout:
                raise ParseError("key layout hash mismatch", off)
            crs[tag] = c
        rd.done()
        if FULL not in crs:
            raise ParseError("proving-key file lacks the full circuit")
        return cls(mode, crs, profile)

    def trapdoors_to_bytes(self) -> bytes:
        wr = Writer().raw(TRAPDOORS_MAGIC).u16(FORMAT_VERSION).u8(len(self.crs))
        for tag in sorted(self.crs):
            wr.u8(tag).blob(groth16.trapdoor_to_bytes(self.crs[tag]))
        return wr.getvalue()

    def attach_trapdoors(self, data: bytes):
        rd = Reader(data)
        rd.magic(TRAPDOORS_MAGIC, "trapdoor")
        _check_version(rd)
        for _ in range(rd.u8()):
            off = rd.offset
            tag = rd.u8()
            if tag not in self.crs:
                raise ParseError("trapdoor for unknown circuit tag %d" % tag, off)
            self.crs[tag].trapdoor = groth16.trapdoor_from_bytes(rd.blob(), self.crs[tag])
        rd.done()


class PoaVerifyingKeys:
    def __init__(self, mode: str, vks: dict, profile=None):
        self.mode = mode
        self.vks = vks
        self.profile = _profile(profile)

    def layout_hashes(self) -> dict:
        return {tag: vk.layout_hash for tag, vk in self.vks.items()}

    def to_bytes(self) -> bytes:
        wr = Writer().raw(VKEYS_MAGIC).u16(FORMAT_VERSION).text(self.profile.name).text(self.mode)
        wr.u8(len(self.vks))
        for tag in sorted(self.vks):
            wr.u8(tag).blob(self.vks[tag].to_bytes())
        return wr.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "PoaVerifyingKeys":
        rd = Reader(data)
        rd.magic(VKEYS_MAGIC, "verifying-key")
        _check_version(rd)
        profile = _read_profile(rd)
        off = rd.offset
        mode = rd.text()
        if mode not in MODES:
            raise ParseError("unknown circuit mode %r" % mode, off)
        vks = {}
        for _ in range(rd.u8()):
            off = rd.offset
            tag = rd.u8()
            if tag not in CIRCUIT_TAGS or tag in vks:
                raise ParseError("bad circuit tag %d" % tag, off)
            base = rd.offset + 4
            try:
                vks[tag] = groth16.VerifyingKey.from_bytes(rd.blob())
            except ParseError as exc:
                raise ParseError(str(exc).split(" (at byte")[0], base + (exc.offset or 0)) from None
        rd.done()
        return cls(mode, vks, profile)


def poa_setup(mode: str = PAPER, rng=None, profile=None, test_mode: bool = False) -> PoaKeys:
    """Trusted setup for the full circuit and the commitment-only circuit."""
    profile = _profile(profile)
    rng = as_rng(rng)
    crs = {}
    for tag in CIRCUIT_TAGS:
        cs = build_poa_circuit(mode, profile, commitment_only=(tag == COMMITMENT))
        crs[tag] = groth16.setup(cs, rng.child("circuit-%d" % tag), profile, test_mode)
    keys = PoaKeys(mode, crs, profile)
    for tag in CIRCUIT_TAGS:
        keys._circuits[tag] = crs[tag].cs
    return keys


# -- bundles --------------------------------------------------------------------------


@dataclass
class Opening:
    """Exchange-side opening of the aggregate: the committed total and the blind sum."""

    total: int
    blind_sum: int

    def to_bytes(self, profile) -> bytes:
        nb = profile.inner.coord_bytes
        return (
            Writer().raw(OPENING_MAGIC).u16(FORMAT_VERSION).text(profile.name)
            .scalar(self.total, nb).scalar(self.blind_sum, nb).getvalue()
        )

    @classmethod
    def from_bytes(cls, data: bytes) -> "Opening":
        rd = Reader(data)
        rd.magic(OPENING_MAGIC, "opening")
        _check_version(rd)
        profile = _read_profile(rd)
        nb = profile.inner.coord_bytes
        total = rd.scalar(nb)
        blind = rd.scalar(nb, int(profile.inner.order))
        rd.done()
        return cls(total, blind)


@dataclass
class AssetProofBundle:
    profile: object
    snapshot_hash: bytes
    layout_hashes: dict
    tags: list
    proofs: list
    commitments: list
    aggregate: InnerPoint
    compressed: bool = True
    opening: Opening | None = field(default=None, repr=False, compare=False)

    def __len__(self):
        return len(self.proofs)

    def entry_size(self) -> int:
        curve = self.profile.pairing
        return 1 + groth16.Proof.size(curve, self.compressed) + self.profile.inner.coord_bytes + 1

    def to_bytes(self) -> bytes:
        prof = self.profile
        wr = Writer().raw(BUNDLE_MAGIC).u16(FORMAT_VERSION).text(prof.name)
        wr.u32(len(self.proofs)).raw(self.snapshot_hash)
        wr.u8(len(self.layout_hashes))
        for tag in sorted(self.layout_hashes):
            wr.u8(tag).raw(self.layout_hashes[tag])
        wr.u8(1 if self.compressed else 0)
        wr.raw(self.aggregate.to_bytes(True))
        for tag, pf, c in zip(self.tags, self.proofs, self.commitments):
            wr.u8(tag).raw(pf.to_bytes(self.compressed)).raw(c.to_bytes(True))
        return wr.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "AssetProofBundle":
        rd = Reader(data)
        rd.magic(BUNDLE_MAGIC, "bundle")
        _check_version(rd)
        prof = _read_profile(rd)
        n = rd.u32()
        snap = rd.take(32)
        layouts = {}
        for _ in range(rd.u8()):
            off = rd.offset
            tag = rd.u8()
            if tag not in CIRCUIT_TAGS or tag in layouts:
                raise ParseError("bad circuit tag %d" % tag, off)
            layouts[tag] = rd.take(32)
        off = rd.offset
        flag = rd.u8()
        if flag not in (0, 1):
            raise ParseError("bad proof-encoding flag", off)
        compressed = bool(flag)
        inner = prof.inner
        pw = inner.coord_bytes + 1
        aggregate = rd.element(_point_reader(inner), pw)
        psize = groth16.Proof.size(prof.pairing, compressed)
        if len(data) - rd.pos != n * (1 + psize + pw):
            raise ParseError("bundle body length does not match n=%d" % n, rd.offset)
        tags, proofs, commitments = [], [], []
        for _ in range(n):
            off = rd.offset
            tag = rd.u8()
            if tag not in layouts:
                raise ParseError("entry uses undeclared circuit tag %d" % tag, off)
            tags.append(tag)
            proofs.append(rd.element(lambda b, o: groth16.Proof.from_bytes(prof.pairing, b, o), psize))
            commitments.append(rd.element(_point_reader(inner), pw))
        rd.done()
        return cls(prof, snap, layouts, tags, proofs, commitments, aggregate, compressed)


# per-entry proving, usable in a worker process

_WORKER = {}


def _worker_init(keys_blob: bytes):
    _WORKER["keys"] = PoaKeys.from_bytes(keys_blob)


def _entry_task(keys: PoaKeys, task):
    """Prove one entry; returns ``(tag, proof bytes, commitment xy, blind, b)``."""
    index, y_xy, v, x, blind, use_full, seed_key = task
    curve = keys.profile.inner
    rng = PrfRng(_key=seed_key)
    order = int(curve.order)
    if blind is None:
        blind = rng.child("blind").nonzero(order)
    inputs = {"y.x": int(y_xy[0]), "y.y": int(y_xy[1]), "v": int(v), "r": int(blind)}
    if x is not None or use_full:
        tag = FULL
        inputs["x"] = int(x) if x is not None else rng.child("dummy-key").nonzero(order)
    else:
        tag = COMMITMENT
    cs = keys.circuit(tag)
    t = cs.generate_assignment(inputs)
    proof = groth16.prove(keys.crs[tag], t, rng=rng.child("proof"))
    c = InnerPoint(curve, (mpz(t.values[4]), mpz(t.values[5])))
    # keys were checked against their addresses before dispatch
    return index, tag, proof.to_bytes(False), c.xy, int(blind), int(v) if x is not None else 0


def _pool_task(task):
    return _entry_task(_WORKER["keys"], task)


def exchange_prove(keys: PoaKeys, anon: AnonymitySet, secrets, rng=None, jobs: int = 1,
                   full_for_all: bool = False, compressed: bool = True) -> AssetProofBundle:
    """Build the bundle of per-address proofs and the aggregate commitment.

    ``secrets`` maps an address (InnerPoint or its coordinate pair) to its
    private key ``x`` or to ``(x, blind)``; addresses absent from it are
    proven with ``s = 0``.  Claimed keys that do not open their address raise
    :class:`KeyMismatchError`.  The returned bundle carries the exchange-side
    :class:`Opening` in ``bundle.opening`` (never serialized).
    """
    if isinstance(secrets, ExchangeSecrets):
        if secrets.snapshot_hash != anon.hash:
            raise CircuitMismatch("secrets were generated for a different snapshot")
        secrets = secrets.as_map(anon)
    curve = anon.profile.inner
    if keys.profile.name != anon.profile.name:
        raise CircuitMismatch("keys and snapshot use different curve profiles")
    order = int(curve.order)
    lookup = {}
    for addr, sec in secrets.items():
        xy = addr.xy if isinstance(addr, InnerPoint) else (mpz(addr[0]), mpz(addr[1]))
        x, blind = (sec if isinstance(sec, tuple) else (sec, None))
        lookup[xy] = (int(x) % order, blind)
    known = {e.y.xy for e in anon}
    for xy, (x, _) in lookup.items():
        if xy not in known:
            raise KeyError("secret given for an address outside the anonymity set")
        if (curve.G * x).xy != xy:
            raise KeyMismatchError("claimed key does not match its address")
    root = as_rng(rng).child("bundle")
    tasks = []
    for i, e in enumerate(anon):
        x, blind = lookup.get(e.y.xy, (None, None))
        tasks.append((i, e.y.xy, int(e.v), x, blind, full_for_all, root.child(i)._key))
    if full_for_all or any(t[3] is not None for t in tasks):
        keys.circuit(FULL)
    if not full_for_all:
        keys.circuit(COMMITMENT)
    jobs = max(1, int(jobs or 1))
    if jobs == 1 or len(tasks) < 2:
        results = [_entry_task(keys, t) for t in tasks]
    else:
        with ProcessPoolExecutor(jobs, initializer=_worker_init, initargs=(keys.to_bytes(),)) as pool:
            results = list(pool.map(_pool_task, tasks, chunksize=max(1, len(tasks) // (4 * jobs))))
    results.sort(key=lambda r: r[0])
    pairing = keys.profile.pairing
    tags, proofs, comms = [], [], []
    total, blind_sum = 0, 0
    aggregate = curve.O
    for _, tag, pf, cxy, blind, b in results:
        tags.append(tag)
        proofs.append(groth16.Proof.from_bytes(pairing, pf))
        c = InnerPoint(curve, cxy)
        comms.append(c)
        aggregate = aggregate + c
        total += b
        blind_sum = (blind_sum + blind) % order
    used = sorted(set(tags)) or [FULL]
    layouts = {tag: keys.crs[tag].layout_hash for tag in used}
    return AssetProofBundle(anon.profile, anon.hash, layouts, tags, proofs, comms, aggregate, compressed,
                            Opening(total, blind_sum))


# -- verification ----------------------------------------------------------------------


@dataclass(frozen=True)
class Verdict:
    accepted: bool
    index: int | None = None
    check: str | None = None
    reason: str = ""

    def __bool__(self):
        return self.accepted

    def __str__(self):
        if self.accepted:
            return "Accept"
        where = "" if self.index is None else " at entry %d" % self.index
        return "Reject(check %s%s: %s)" % (self.check, where, self.reason)


ACCEPT = Verdict(True)

CHECK_PROOF = "a"
CHECK_COMMITMENT = "b"
CHECK_SUM = "c"
CHECK_SNAPSHOT = "snapshot"


def customer_verify(vks, anon: AnonymitySet, bundle: AssetProofBundle) -> Verdict:
    """Check every proof against (y_i, v_i, c_i), the commitments, and the aggregate sum.

    Returns the first failure as a :class:`Verdict` carrying the entry index
    and check label: ``a`` proof verification, ``b`` commitment binding,
    ``c`` aggregate sum, ``snapshot`` mismatched public data.
    """
    if isinstance(vks, PoaKeys):
        vks = vks.verifying()
    n = len(anon)
    if not (len(bundle.proofs) == len(bundle.commitments) == len(bundle.tags) == n):
        raise ShapeError("bundle has %d entries, snapshot has %d" % (len(bundle.proofs), n))
    if bundle.profile.name != vks.profile.name or anon.profile.name != vks.profile.name:
        raise CircuitMismatch("bundle, snapshot and keys use different curve profiles")
    for tag, h in bundle.layout_hashes.items():
        if tag not in vks.vks or vks.vks[tag].layout_hash != h:
            raise CircuitMismatch("bundle was produced with different keys")
    if bundle.snapshot_hash != anon.hash:
        return Verdict(False, None, CHECK_SNAPSHOT, "bundle refers to a different snapshot")
    curve = anon.profile.inner
    total = curve.O
    for i, (e, tag, pf, c) in enumerate(zip(anon, bundle.tags, bundle.proofs, bundle.commitments)):
        if tag not in bundle.layout_hashes:
            return Verdict(False, i, CHECK_PROOF, "unknown circuit tag")
        if c.is_identity() or not c.is_on_curve():
            return Verdict(False, i, CHECK_COMMITMENT, "commitment is not a usable curve point")
        try:
            ok = groth16.verify(vks.vks[tag], public_vector(e.y, e.v, c), pf)
        except SubgroupError as exc:
            return Verdict(False, i, CHECK_PROOF, str(exc))
        if not ok:
            return Verdict(False, i, CHECK_PROOF, "proof does not verify")
        total = total + c
    if total != bundle.aggregate:
        return Verdict(False, None, CHECK_SUM, "sum of commitments differs from the aggregate")
    return ACCEPT


def open_aggregate(bundle: AssetProofBundle, total: int, blind_sum: int) -> bool:
    """True iff ``total G + blind_sum H`` equals the aggregate commitment."""
    curve = bundle.profile.inner
    return curve.pedersen_commit(total, blind_sum) == bundle.aggregate


def default_jobs() -> int:
    return os.cpu_count() or 1
