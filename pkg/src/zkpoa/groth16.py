"""Groth16 setup, prove and verify, plus the trapdoor simulator and key/proof formats.

The CRS carries the full Groth16 reference string (powers of ``x`` in both
groups, the gamma- and delta-scaled wire terms, the ``x^i t(x) / delta``
terms) and, for the prover, the per-wire queries ``[u_i(x)]_1``,
``[v_i(x)]_1`` and ``[v_i(x)]_2``.  Those queries are linear combinations
of the powers, so they add no trapdoor information; they only let the
prover skip two interpolations and exploit the many boolean wires.

Verification is one multi-Miller loop over three pairs with a single final
exponentiation, compared against a cached ``e(alpha, beta)``:

    e(A, B) * e(-IC, gamma) * e(-C, delta) == e(alpha, beta)
"""

from __future__ import annotations

import base64
import binascii
from dataclasses import dataclass

from gmpy2 import mpz

from .codec import Reader, Writer
from .curves import G1Point, G2Point, load_profile
from .curves.bn import PreparedG2
from .curves.msm import FixedBase, msm
from .errors import CircuitMismatch, FieldMismatch, ParseError, ShapeError, StateError
from .qap import Qap, compile as compile_qap
from .r1cs import Assignment, ConstraintSystem, PublicInputs
from .rng import as_rng

PK_MAGIC = b"ZKPK"
VK_MAGIC = b"ZKVK"
TD_MAGIC = b"ZKTD"
FORMAT_VERSION = 1
ARMOR_PREFIX = "zkpoa-proof-v1:"


@dataclass(frozen=True)
class Trapdoor:
    """The setup secrets (alpha, beta, gamma, delta, x); nonzero scalars."""

    alpha: int
    beta: int
    gamma: int
    delta: int
    x: int

    def as_tuple(self):
        return (self.alpha, self.beta, self.gamma, self.delta, self.x)


# -- proofs ----------------------------------------------------------------------


class Proof:
    __slots__ = ("A", "B", "C")

    def __init__(self, A: G1Point, B: G2Point, C: G1Point):
        self.A, self.B, self.C = A, B, C

    def __eq__(self, other):
        return isinstance(other, Proof) and (self.A, self.B, self.C) == (other.A, other.B, other.C)

    def __hash__(self):
        return hash((self.A, self.B, self.C))

    def __repr__(self):
        return "Proof(%s...)" % self.to_bytes()[:8].hex()

    @staticmethod
    def size(curve, compressed=True) -> int:
        w = curve.coord_bytes
        return 4 * w if compressed else 6 * w

    def to_bytes(self, compressed: bool = True) -> bytes:
        """Compressed: A, B, C all compressed.  Otherwise A and C affine, B compressed."""
        if compressed:
            return self.A.to_bytes(True) + self.B.to_bytes(True) + self.C.to_bytes(True)
        return self.A.to_bytes(False) + self.B.to_bytes(True) + self.C.to_bytes(False)

    @classmethod
    def from_bytes(cls, curve, data: bytes, offset: int = 0) -> "Proof":
        w = curve.coord_bytes
        if len(data) == 4 * w:
            g1w = w
        elif len(data) == 6 * w:
            g1w = 2 * w
        else:
            raise ParseError("proof must be %d or %d bytes, got %d" % (4 * w, 6 * w, len(data)), offset)
        rd = Reader(data, offset)
        A = rd.element(lambda b, o: G1Point.from_bytes(curve, b, o), g1w)
        B = rd.element(lambda b, o: G2Point.from_bytes(curve, b, o), 2 * w)
        C = rd.element(lambda b, o: G1Point.from_bytes(curve, b, o), g1w)
        return cls(A, B, C)

    def armor(self, compressed: bool = True) -> str:
        """One-line transport form."""
        return ARMOR_PREFIX + base64.b64encode(self.to_bytes(compressed)).decode()

    @classmethod
    def from_armor(cls, curve, text: str) -> "Proof":
        text = text.strip()
        if not text.startswith(ARMOR_PREFIX):
            raise ParseError("missing proof armor header", 0)
        try:
            raw = base64.b64decode(text[len(ARMOR_PREFIX):], validate=True)
        except (binascii.Error, ValueError):
            raise ParseError("invalid base64 in armored proof", len(ARMOR_PREFIX)) from None
        return cls.from_bytes(curve, raw)


# -- keys ------------------------------------------------------------------------


class VerifyingKey:
    def __init__(self, curve, alpha1, beta2, gamma2, delta2, gamma_terms, layout_hash: bytes, profile_name: str):
        self.curve = curve
        self.alpha1 = alpha1
        self.beta2 = beta2
        self.gamma2 = gamma2
        self.delta2 = delta2
        self.gamma_terms = gamma_terms
        self.layout_hash = layout_hash
        self.profile_name = profile_name
        self._prepared = None
        self._alpha_beta = None

    @property
    def num_public(self) -> int:
        """l + 1, counting the constant wire."""
        return len(self.gamma_terms)

    def prepared(self):
        if self._prepared is None:
            self._prepared = (PreparedG2(self.gamma2), PreparedG2(self.delta2))
        return self._prepared

    def alpha_beta(self):
        if self._alpha_beta is None:
            self._alpha_beta = self.curve.pairing(self.alpha1, self.beta2)
        return self._alpha_beta

    def to_bytes(self) -> bytes:
        wr = Writer().raw(VK_MAGIC).u16(FORMAT_VERSION).text(self.profile_name).raw(self.layout_hash)
        wr.u32(len(self.gamma_terms))
        wr.raw(self.alpha1.to_bytes()).raw(self.beta2.to_bytes()).raw(self.gamma2.to_bytes()).raw(self.delta2.to_bytes())
        for P in self.gamma_terms:
            wr.raw(P.to_bytes())
        return wr.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "VerifyingKey":
        rd = Reader(data)
        rd.magic(VK_MAGIC, "verifying-key")
        _check_version(rd)
        name = rd.text()
        curve = _profile(name, rd).pairing
        layout = rd.take(32)
        count = rd.u32()
        w = curve.coord_bytes
        g1 = lambda b, o: G1Point.from_bytes(curve, b, o)  # noqa: E731
        g2 = lambda b, o: G2Point.from_bytes(curve, b, o)  # noqa: E731
        alpha1 = rd.element(g1, w)
        beta2, gamma2, delta2 = (rd.element(g2, 2 * w) for _ in range(3))
        terms = [rd.element(g1, w) for _ in range(count)]
        rd.done()
        return cls(curve, alpha1, beta2, gamma2, delta2, terms, layout, name)


class Crs:
    """Proving-side reference string; also answers every verifying-key query."""

    def __init__(self, profile, cs: ConstraintSystem, bind_public: bool, n: int, sigma1: dict, sigma2: dict,
                 queries: dict, trapdoor: Trapdoor | None = None):
        self.profile = profile
        self.curve = profile.pairing
        self.cs = cs
        self.bind_public = bind_public
        self.n = n
        self.sigma1 = sigma1
        self.sigma2 = sigma2
        self.queries = queries
        self.trapdoor = trapdoor
        self.layout_hash = cs.layout_hash
        self._qap = None
        self._vk = None
        self._pub_scalars = None

    @property
    def qap(self) -> Qap:
        if self._qap is None:
            self._qap = compile_qap(self.cs, bind_public=self.bind_public)
            if self._qap.n != self.n:
                raise CircuitMismatch("key domain size %d does not match the circuit (%d)" % (self.n, self._qap.n))
        return self._qap

    @property
    def num_public(self) -> int:
        return self.cs.num_public

    @property
    def vk(self) -> VerifyingKey:
        if self._vk is None:
            s1, s2 = self.sigma1, self.sigma2
            self._vk = VerifyingKey(
                self.curve,
                s1["alpha"],
                s2["beta"],
                s2["gamma"],
                s2["delta"],
                s1["gamma_terms"],
                self.layout_hash,
                self.profile.name,
            )
        return self._vk

    def without_trapdoor(self) -> "Crs":
        return Crs(self.profile, self.cs, self.bind_public, self.n, self.sigma1, self.sigma2, self.queries)

    def vector_lengths(self) -> dict:
        s1, s2 = self.sigma1, self.sigma2
        return {
            "powers1": len(s1["powers"]),
            "gamma_terms": len(s1["gamma_terms"]),
            "delta_terms": len(s1["delta_terms"]),
            "h_terms": len(s1["h_terms"]),
            "powers2": len(s2["powers"]),
        }

    def check_consistency(self, rng=None, samples: int = 3) -> bool:
        """Pairing checks e([x^i]_1, [1]_2) == e([1]_1, [x^i]_2) at sampled i."""
        rng = as_rng(rng)
        c = self.curve
        p1, p2 = self.sigma1["powers"], self.sigma2["powers"]
        idx = {0, len(p1) - 1} | {rng.randbelow(len(p1)) for _ in range(samples)}
        for i in sorted(idx):
            lhs = c.pairing_product([(p1[i], c.g2), (-c.g1, p2[i])])
            if not lhs.is_identity():
                return False
        return True

    def public_scalars(self) -> list:
        """(beta u_i + alpha v_i + w_i)(x) for public wires; trapdoor required."""
        td = _need_trapdoor(self)
        if self._pub_scalars is None:
            r = self.curve.r
            us, vs, ws = self.qap.evaluate_at(td.x)
            self._pub_scalars = [
                (td.beta * us[i] + td.alpha * vs[i] + ws[i]) % r for i in range(self.num_public)
            ]
        return self._pub_scalars

    # -- serialization ----------------------------------------------------------
    def to_bytes(self) -> bytes:
        """Proving-key file body; never contains the trapdoor."""
        s1, s2, q = self.sigma1, self.sigma2, self.queries
        wr = Writer().raw(PK_MAGIC).u16(FORMAT_VERSION).text(self.profile.name).raw(self.layout_hash)
        wr.u8(1 if self.bind_public else 0).u32(self.n)
        wr.blob(self.cs.to_bytes())

        def g1s(points):
            wr.u32(len(points))
            for P in points:
                wr.raw(P.to_bytes(False))

        def g2s(points):
            wr.u32(len(points))
            for P in points:
                wr.raw(P.to_bytes(False))

        g1s([s1["alpha"], s1["beta"], s1["delta"]])
        for key in ("powers", "gamma_terms", "delta_terms", "h_terms"):
            g1s(s1[key])
        g2s([s2["beta"], s2["gamma"], s2["delta"]])
        g2s(s2["powers"])
        g1s(q["a"])
        g1s(q["b1"])
        g2s(q["b2"])
        return wr.getvalue()

    @classmethod
    def from_bytes(cls, data: bytes) -> "Crs":
        """Load a proving key.

        Points are checked to lie on their curves.  The G2 subgroup check is
        left out for the bulk vectors: the file is the prover's own, and a
        corrupted point can only make its proofs fail to verify.
        """
        rd = Reader(data)
        rd.magic(PK_MAGIC, "proving-key")
        _check_version(rd)
        profile = _profile(rd.text(), rd)
        curve = profile.pairing
        layout = rd.take(32)
        bind = rd.u8()
        if bind not in (0, 1):
            raise ParseError("bad flag byte", rd.offset - 1)
        n = rd.u32()
        cs_off = rd.offset + 4
        cs = ConstraintSystem.from_bytes(rd.blob(), profile.scalar_field)
        if cs.layout_hash != layout:
            raise ParseError("embedded circuit does not match the header layout hash", cs_off)
        w = curve.coord_bytes

        def g1s():
            count = rd.u32()
            return [rd.element(lambda b, o: G1Point.from_bytes(curve, b, o), 2 * w) for _ in range(count)]

        def g2s():
            count = rd.u32()
            return [
                rd.element(lambda b, o: G2Point.from_bytes(curve, b, o, check_subgroup=False), 4 * w)
                for _ in range(count)
            ]

        head = g1s()
        if len(head) != 3:
            raise ParseError("expected alpha, beta, delta in G1", rd.offset)
        sigma1 = {"alpha": head[0], "beta": head[1], "delta": head[2]}
        for key in ("powers", "gamma_terms", "delta_terms", "h_terms"):
            sigma1[key] = g1s()
        head2 = g2s()
        if len(head2) != 3:
            raise ParseError("expected beta, gamma, delta in G2", rd.offset)
        for P in head2:
            curve.check_g2(P.xy)
        sigma2 = {"beta": head2[0], "gamma": head2[1], "delta": head2[2], "powers": g2s()}
        queries = {"a": g1s(), "b1": g1s(), "b2": g2s()}
        rd.done()
        crs = cls(profile, cs, bool(bind), n, sigma1, sigma2, queries)
        _check_shapes(crs)
        return crs


def _check_version(rd: Reader):
    off = rd.offset
    version = rd.u16()
    if version != FORMAT_VERSION:
        raise ParseError("unsupported format version %d" % version, off)


def _profile(name: str, rd: Reader):
    try:
        return load_profile(name)
    except ValueError:
        raise ParseError("unknown curve profile %r" % name, rd.offset) from None


def _check_shapes(crs: Crs):
    n, m1, l1 = crs.n, crs.cs.num_wires, crs.cs.num_public
    want = {"powers1": n, "gamma_terms": l1, "delta_terms": m1 - l1, "h_terms": n - 1, "powers2": n}
    got = crs.vector_lengths()
    for key, size in want.items():
        if got[key] != size:
            raise ParseError("CRS vector %s has length %d, expected %d" % (key, got[key], size))
    for key in ("a", "b1", "b2"):
        if len(crs.queries[key]) != m1:
            raise ParseError("prover query %s has the wrong length" % key)


def _need_trapdoor(crs) -> Trapdoor:
    td = getattr(crs, "trapdoor", None)
    if td is None:
        raise StateError("operation needs a CRS that retains its trapdoor (test mode)")
    return td


def trapdoor_to_bytes(crs: Crs) -> bytes:
    td = _need_trapdoor(crs)
    nb = crs.curve.fr.nbytes
    wr = Writer().raw(TD_MAGIC).u16(FORMAT_VERSION).text(crs.profile.name).raw(crs.layout_hash)
    for v in td.as_tuple():
        wr.scalar(v, nb)
    return wr.getvalue()


def trapdoor_from_bytes(data: bytes, crs: Crs | None = None) -> Trapdoor:
    """Parse a trapdoor file; with ``crs`` given, check that it belongs to it."""
    rd = Reader(data)
    rd.magic(TD_MAGIC, "trapdoor")
    _check_version(rd)
    profile = _profile(rd.text(), rd)
    layout = rd.take(32)
    fr = profile.scalar_field
    vals = []
    for _ in range(5):
        off = rd.offset
        v = rd.scalar(fr.nbytes, fr.modulus)
        if v == 0:
            raise ParseError("trapdoor scalar is zero", off)
        vals.append(v)
    rd.done()
    td = Trapdoor(*vals)
    if crs is not None:
        if layout != crs.layout_hash:
            raise CircuitMismatch("trapdoor belongs to a different circuit")
        c = crs.curve
        if crs.n > 1 and c.g1_mul(c.g1.xy, td.x) != crs.sigma1["powers"][1].xy:
            raise CircuitMismatch("trapdoor does not match this CRS")
    return td


# -- the three algorithms --------------------------------------------------------


def setup(cs: ConstraintSystem, rng=None, profile=None, test_mode: bool = False, bind_public: bool = True) -> Crs:
    """Trusted setup.  The trapdoor is dropped unless ``test_mode`` is set."""
    if profile is None or isinstance(profile, str):
        profile = load_profile(profile or "standard")
    curve = profile.pairing
    if cs.field.modulus != curve.r:
        raise FieldMismatch("circuit field does not match the scalar field of %s" % curve.name)
    if not cs.sealed:
        cs.seal()
    qap = compile_qap(cs, bind_public=bind_public)
    rng = as_rng(rng).child("setup")
    r = int(curve.r)
    while True:
        alpha, beta, gamma, delta, x = (rng.nonzero(r) for _ in range(5))
        tx = qap.domain.vanishing_at(x)
        if tx:
            break
    n = qap.n
    l1 = cs.num_public
    us, vs, ws = qap.evaluate_at(x)
    g_inv, d_inv = curve.fr.inv(gamma), curve.fr.inv(delta)
    powers = [mpz(1)]
    for _ in range(n - 1):
        powers.append(powers[-1] * x % r)
    k = [(beta * us[i] + alpha * vs[i] + ws[i]) % r for i in range(cs.num_wires)]
    t_d = tx * d_inv % r

    fb1 = FixedBase(curve.g1_add, curve.g1.xy, r.bit_length())
    fb2 = FixedBase(curve.g2_add, curve.g2.xy, r.bit_length())
    G1 = lambda s: G1Point(curve, fb1.mul(s))  # noqa: E731
    G2 = lambda s: G2Point(curve, fb2.mul(s))  # noqa: E731
    sigma1 = {
        "alpha": G1(alpha),
        "beta": G1(beta),
        "delta": G1(delta),
        "powers": [G1(s) for s in powers],
        "gamma_terms": [G1(k[i] * g_inv % r) for i in range(l1)],
        "delta_terms": [G1(k[i] * d_inv % r) for i in range(l1, cs.num_wires)],
        "h_terms": [G1(powers[i] * t_d % r) for i in range(n - 1)],
    }
    sigma2 = {
        "beta": G2(beta),
        "gamma": G2(gamma),
        "delta": G2(delta),
        "powers": [G2(s) for s in powers],
    }
    queries = {"a": [G1(s) for s in us], "b1": [G1(s) for s in vs], "b2": [G2(s) for s in vs]}
    td = Trapdoor(int(alpha), int(beta), int(gamma), int(delta), int(x)) if test_mode else None
    crs = Crs(profile, cs, bind_public, n, sigma1, sigma2, queries, td)
    crs._qap = qap
    return crs


def _values(crs: Crs, public, witness) -> list:
    if isinstance(public, Assignment) and witness is None:
        values = list(public.values)
    else:
        values = list(public) + list(witness)
    if len(values) != crs.cs.num_wires:
        raise ShapeError("assignment has %d wires, circuit has %d" % (len(values), crs.cs.num_wires))
    lh = getattr(public, "layout_hash", None)
    if lh is not None and lh != crs.layout_hash:
        raise CircuitMismatch("assignment was produced for a different circuit")
    return [mpz(int(v)) % crs.curve.r for v in values]


def msm1(curve, points, scalars):
    return msm(curve.g1_add, points, scalars, int(curve.r))


def _prove(crs: Crs, values: list, r_blind: int, s_blind: int) -> Proof:
    curve = crs.curve
    order = int(curve.r)
    if values[0] != 1:
        raise ShapeError("wire 0 must carry the constant one")
    h = crs.qap.witness_poly(values)
    s1, s2, q = crs.sigma1, crs.sigma2, crs.queries
    add1, add2 = curve.g1_add, curve.g2_add
    raw = lambda pts: [P.xy for P in pts]  # noqa: E731
    A = add1(s1["alpha"].xy, msm1(curve, raw(q["a"]), values))
    A = add1(A, curve.g1_mul(s1["delta"].xy, r_blind))
    B2 = add2(s2["beta"].xy, msm(add2, raw(q["b2"]), values, order))
    B2 = add2(B2, curve.g2_mul(s2["delta"].xy, s_blind))
    B1 = add1(s1["beta"].xy, msm1(curve, raw(q["b1"]), values))
    B1 = add1(B1, curve.g1_mul(s1["delta"].xy, s_blind))
    l1 = crs.num_public
    C = msm1(curve, raw(s1["delta_terms"]), values[l1:])
    hc = list(h.coeffs)
    if len(hc) > crs.n - 1:
        raise StateError("quotient degree exceeds the CRS")
    C = add1(C, msm1(curve, raw(s1["h_terms"][: len(hc)]), hc))
    C = add1(C, curve.g1_mul(A, s_blind))
    C = add1(C, curve.g1_mul(B1, r_blind))
    C = add1(C, curve.g1_mul(s1["delta"].xy, (-r_blind * s_blind) % order))
    return Proof(G1Point(curve, A), G2Point(curve, B2), G1Point(curve, C))


def prove(crs: Crs, public, witness=None, rng=None) -> Proof:
    """Prove knowledge of ``witness`` for ``public``.

    ``public`` may also be a full :class:`Assignment` with ``witness`` left
    out.  Unsatisfied assignments raise ``NotSatisfiedError``.
    """
    values = _values(crs, public, witness)
    rng = as_rng(rng)
    order = int(crs.curve.r)
    return _prove(crs, values, rng.nonzero(order), rng.nonzero(order))


def _public_list(key, public) -> list:
    lh = getattr(public, "layout_hash", None)
    if lh is not None and lh != key.layout_hash:
        raise CircuitMismatch("public inputs belong to a different circuit")
    values = list(public.public if isinstance(public, Assignment) else public)
    if len(values) != key.num_public:
        raise ShapeError("expected %d public values, got %d" % (key.num_public, len(values)))
    if int(values[0]) != 1:
        raise ShapeError("public input vector must start with the constant one")
    return [int(v) for v in values]


def public_commitment(key, public) -> G1Point:
    """IC = sum a_i [(beta u_i + alpha v_i + w_i) / gamma]_1."""
    vk = key.vk if isinstance(key, Crs) else key
    values = _public_list(vk, public)
    c = vk.curve
    return G1Point(c, msm1(c, [P.xy for P in vk.gamma_terms], values))


def verify(key, public, proof: Proof) -> bool:
    """Check the Groth16 pairing equation for ``proof`` on ``public``."""
    vk = key.vk if isinstance(key, Crs) else key
    c = vk.curve
    values = _public_list(vk, public)
    c.check_g1(proof.A.xy)
    c.check_g1(proof.C.xy)
    c.check_g2(proof.B.xy)
    if proof.A.is_identity() or proof.B.is_identity():
        return False
    ic = msm1(c, [P.xy for P in vk.gamma_terms], values)
    pg, pd = vk.prepared()
    f = c.miller_loop(
        [
            (proof.A.xy, c.prepare(proof.B.xy)),
            (c.g1_neg(ic), pg.lines),
            (c.g1_neg(proof.C.xy), pd.lines),
        ]
    )
    return c.final_exponentiation(f) == vk.alpha_beta().value


_DLOG_LIMIT = 1 << 20


def _dlog_tables(curve):
    tables = getattr(curve, "_dlog_tables", None)
    if tables is None:
        t1, t2 = {}, {}
        P, Q = None, None
        for k in range(int(curve.r)):
            t1[P] = k
            t2[Q] = k
            P = curve.g1_add(P, curve.g1.xy)
            Q = curve.g2_add(Q, curve.g2.xy)
        tables = (t1, t2)
        curve._dlog_tables = tables
    return tables


def verify_with_trapdoor(crs: Crs, public, proof: Proof) -> bool:
    """Check the verification equation using the retained trapdoor instead of the CRS terms.

    On curves with a small group order every proof element is reduced to its
    discrete log and the equation ``a b = alpha beta + sum a_i K_i(x) + c delta``
    is checked over the integers mod r with no pairing at all.  On larger
    curves the right-hand side collapses to one G1 point ``X`` built from
    trapdoor scalars, and the check is ``e(A, B) == e(X, g2)``; this still
    bypasses the gamma/delta terms and the verifying-key pairing product.
    """
    td = _need_trapdoor(crs)
    c = crs.curve
    values = _public_list(crs, public)
    c.check_g1(proof.A.xy)
    c.check_g1(proof.C.xy)
    c.check_g2(proof.B.xy)
    if proof.A.is_identity() or proof.B.is_identity():
        return False
    r = int(c.r)
    pub = sum(a * k for a, k in zip(values, crs.public_scalars())) % r
    base = (td.alpha * td.beta + pub) % r
    if r < _DLOG_LIMIT:
        t1, t2 = _dlog_tables(c)
        a, b, cc = t1[proof.A.xy], t2[proof.B.xy], t1[proof.C.xy]
        return (a * b - base - cc * td.delta) % r == 0
    X = c.g1_add(c.g1_mul(c.g1.xy, base), c.g1_mul(proof.C.xy, td.delta))
    f = c.miller_loop([(proof.A.xy, c.prepare(proof.B.xy)), (c.g1_neg(X), c.prepare(c.g2.xy))])
    return c.final_exponentiation(f) == c.tower.f12_one


def simulate(crs: Crs, public, rng=None) -> Proof:
    """Witness-free proof from the trapdoor: random A, B; C solved from the verification equation."""
    td = _need_trapdoor(crs)
    c = crs.curve
    values = _public_list(crs, public)
    rng = as_rng(rng)
    r = int(c.r)
    a, b = rng.nonzero(r), rng.nonzero(r)
    pub = sum(v * k for v, k in zip(values, crs.public_scalars())) % r
    cc = (a * b - td.alpha * td.beta - pub) * int(c.fr.inv(td.delta)) % r
    return Proof(c.g1 * a, c.g2 * b, c.g1 * cc)


def public_inputs(crs: Crs, values) -> PublicInputs:
    return PublicInputs(values, crs.layout_hash)
