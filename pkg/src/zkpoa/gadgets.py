"""Circuit gadgets for the proof-of-assets statement.

The full circuit proves, for public ``(y, v, c)``:

    s = [x G == y],   b = s v,   c = b G + r H

with ``x``, ``s`` and ``r`` private.  Point arithmetic happens on the inner
curve, whose coordinates are native field elements of the circuit.

Fixed-base scalar multiplication works on 2-bit windows.  Window ``k``
selects one of four precomputed constants ``T_k[d] = d 4^k B + D`` with a
selection that is linear in ``(1, b0, b1, b0 b1)``, so each window costs one
product constraint plus one three-constraint point addition.  The offset
``D`` keeps every selectable point away from the identity, and the running
sum starts at a separate point ``Acc``.  A single addition of the constant
``-(Acc + K D)`` at the end removes both, where ``K`` counts the windows.
Both points come from the inner curve's hash-to-point, so nobody knows
their discrete logs and honest inputs never hit an exceptional case.
"""

from __future__ import annotations

from dataclasses import dataclass

from gmpy2 import invert, mpz

from .curves import InnerPoint, load_profile
from .errors import ExceptionalPointError
from .r1cs import AUXILIARY, PUBLIC, ConstraintSystem, LinearCombination, Variable

PAPER = "paper-faithful"
HARDENED = "hardened"
MODES = (PAPER, HARDENED)

KEY_BITS = 256
BLIND_BITS = 256
BALANCE_BITS = 51
MAX_BALANCE = (1 << BALANCE_BITS) - 1

ACC_LABEL = b"accumulator"
OFFSET_LABEL = b"window-offset"

PUBLIC_NAMES = ("y.x", "y.y", "v", "c.x", "c.y")


@dataclass(frozen=True)
class PointWires:
    """Affine point whose coordinates are linear combinations of wires."""

    x: LinearCombination
    y: LinearCombination

    def value(self, ctx) -> tuple:
        return (ctx[self.x], ctx[self.y])


@dataclass(frozen=True)
class BitVector:
    """Little-endian boolean wires."""

    wires: tuple

    def __len__(self):
        return len(self.wires)

    def __getitem__(self, i):
        return self.wires[i]


@dataclass(frozen=True)
class PoaInstance:
    y: InnerPoint
    v: int

    def __post_init__(self):
        if not 0 <= int(self.v) <= MAX_BALANCE:
            raise ValueError("balance %d outside [0, 2^%d)" % (self.v, BALANCE_BITS))


@dataclass(frozen=True)
class PoaWitness:
    x: int
    s: int
    r: int


def _lc(cs, value) -> LinearCombination:
    return cs.lc(value)


def _const_point(cs, P: InnerPoint) -> PointWires:
    x, y = P.xy
    return PointWires(cs.lc(int(x)), cs.lc(int(y)))


# -- unpacking -----------------------------------------------------------------


def gadget_unpack(cs: ConstraintSystem, scalar, numbits: int, raw=None) -> BitVector:
    """Boolean decomposition: ``numbits`` booleanity constraints plus one packing constraint.

    ``raw(ctx)`` supplies the integer to decompose; it defaults to the wire
    value.  Keys and blinds live modulo the inner group order, which is
    larger than the circuit field, so callers pass the raw integer.
    """
    scalar = _lc(cs, scalar)
    if raw is None:
        raw = lambda ctx: int(ctx[scalar])  # noqa: E731
    bits = []
    for i in range(numbits):
        b = cs.allocate(AUXILIARY, compute=lambda ctx, i=i: (raw(ctx) >> i) & 1)
        cs.enforce(b, b, b)
        bits.append(b)
    packed = LinearCombination({}, cs.modulus)
    for i, b in enumerate(bits):
        packed = packed + b * (1 << i)
    cs.enforce(packed, cs.one, scalar)
    return BitVector(tuple(bits))


# -- point addition ---------------------------------------------------------------


def _slope(ctx, P: PointWires, Q: PointWires, p):
    x1, y1 = P.value(ctx)
    x2, y2 = Q.value(ctx)
    if x1 == x2:
        raise ExceptionalPointError("incomplete addition: operands share an x-coordinate")
    return (y2 - y1) * invert(x2 - x1, p) % p


def gadget_point_add(cs: ConstraintSystem, P: PointWires, Q: PointWires, out=None) -> PointWires:
    """Chord addition in three constraints; P and Q must have distinct x-coordinates.

    ``out`` optionally names existing wires (e.g. public outputs) to receive the sum.
    """
    p = cs.modulus
    m = cs.allocate(AUXILIARY, compute=lambda ctx: _slope(ctx, P, Q, p))

    def x3_of(ctx):
        mv = ctx[m]
        return (mv * mv - ctx[P.x] - ctx[Q.x]) % p

    def y3_of(ctx):
        x1 = ctx[P.x]
        return (ctx[m] * (x1 - ctx[x3]) - ctx[P.y]) % p

    if out is None:
        x3 = cs.allocate(AUXILIARY, compute=x3_of)
        y3 = cs.allocate(AUXILIARY, compute=y3_of)
    else:
        x3, y3 = out
        cs.set_compute(x3, x3_of)
        cs.set_compute(y3, y3_of)
    cs.enforce(m, Q.x - P.x, Q.y - P.y)
    cs.enforce(m, m, x3 + P.x + Q.x)
    cs.enforce(m, P.x - x3, y3 + P.y)
    return PointWires(_lc(cs, x3), _lc(cs, y3))


# -- windowed fixed-base multiplication -------------------------------------------


def window_table(curve, base: InnerPoint, numbits: int) -> tuple:
    """Constants ``d * 4^k * B + D`` for every window ``k``, cached on the curve."""
    cache = curve.__dict__.setdefault("_window_tables", {})
    key = (base.xy, numbits)
    if key not in cache:
        D = _fixed_point(curve, OFFSET_LABEL)
        rows = []
        step = base
        for k in range(0, numbits, 2):
            row = [D]
            for _ in range(1, 1 << min(2, numbits - k)):
                row.append(row[-1] + step)
            rows.append(tuple(P.xy for P in row))
            step = step * 4
        cache[key] = tuple(rows)
    return cache[key]


def _fixed_point(curve, label: bytes) -> InnerPoint:
    cache = curve.__dict__.setdefault("_fixed_points", {})
    if label not in cache:
        cache[label] = curve.hash_to_point(label)
    return cache[label]


def _select(cs, row, b0, b1=None, prod=None) -> PointWires:
    """Linear selection from a 2- or 4-entry table row."""
    coords = []
    for c in range(2):
        t = [mpz(P[c]) for P in row]
        lc = cs.lc(int(t[0])) + b0 * int(t[1] - t[0])
        if b1 is not None:
            lc = lc + b1 * int(t[2] - t[0]) + prod * int(t[3] - t[2] - t[1] + t[0])
        coords.append(lc)
    return PointWires(*coords)


def _accumulate(cs: ConstraintSystem, curve, bits: BitVector, base: InnerPoint, acc: PointWires):
    """Add ``sum bits_i 2^i B`` into ``acc`` window by window.

    Returns the new accumulator and the constant ``K D`` it picked up.
    """
    table = window_table(curve, base, len(bits))
    for k, row in enumerate(table):
        j = 2 * k
        if len(row) == 4:
            b0, b1 = bits[j], bits[j + 1]
            prod = cs.allocate(AUXILIARY, compute=lambda ctx, b0=b0, b1=b1: ctx[b0] * ctx[b1])
            cs.enforce(b0, b1, prod)
            sel = _select(cs, row, b0, b1, prod)
        else:
            sel = _select(cs, row, bits[j])
        acc = gadget_point_add(cs, acc, sel)
    return acc, _fixed_point(curve, OFFSET_LABEL) * len(table)


def _start(cs, curve) -> tuple:
    A = _fixed_point(curve, ACC_LABEL)
    return _const_point(cs, A), A


def gadget_scalar_mul(cs: ConstraintSystem, scalar, base: InnerPoint, numbits: int = KEY_BITS, raw=None,
                      out=None) -> PointWires:
    """``scalar * base`` for a constant base: unpack, windows, one offset-removing addition.

    For 256 bits this is 257 + 128 * 4 + 3 = 772 constraints.
    """
    curve = base.curve
    with cs.region("unpack"):
        bits = gadget_unpack(cs, scalar, numbits, raw)
    acc0, A = _start(cs, curve)
    with cs.region("windows"):
        acc, offset = _accumulate(cs, curve, bits, base, acc0)
    with cs.region("accumulator"):
        return gadget_point_add(cs, acc, _const_point(cs, -(A + offset)), out)


# -- comparison -----------------------------------------------------------------------


def gadget_compare(cs: ConstraintSystem, computed: PointWires, expected: PointWires, mode: str = PAPER):
    """Ownership bit ``s``: one when the computed point equals the expected one.

    Paper-faithful mode: ``s = sx * sy`` and ``s * s = s`` with ``sx``, ``sy``
    supplied by the prover and otherwise unconstrained.  Hardened mode ties
    ``s`` to the coordinates: ``s (x' - x) = 0``, ``s (y' - y) = 0``, ``s s = s``.
    """
    if mode not in MODES:
        raise ValueError("unknown circuit mode %r" % mode)

    def eq(a, b):
        return lambda ctx: int(ctx[a] == ctx[b])

    if mode == PAPER:
        sx = cs.allocate(AUXILIARY, name="sx", compute=eq(computed.x, expected.x))
        sy = cs.allocate(AUXILIARY, name="sy", compute=eq(computed.y, expected.y))
        s = cs.allocate(AUXILIARY, name="s", compute=lambda ctx: ctx[sx] * ctx[sy])
        cs.enforce(sx, sy, s)
    else:
        s = cs.allocate(
            AUXILIARY,
            name="s",
            compute=lambda ctx: int(ctx[computed.x] == ctx[expected.x] and ctx[computed.y] == ctx[expected.y]),
        )
        cs.enforce(s, computed.x - expected.x, 0)
        cs.enforce(s, computed.y - expected.y, 0)
    cs.enforce(s, s, s)
    return s


# -- pedersen commitment --------------------------------------------------------------


def gadget_pedersen(cs: ConstraintSystem, s, v, r, curve, out=None, raw_r=None) -> PointWires:
    """``c = (s v) G + r H`` in 1 + 155 + 769 + 3 = 928 constraints.

    ``s`` may be the constant 0, which leaves the product gate with an empty
    a-term and forces ``b = 0``.  The two multiplications share one
    accumulator, so only one offset-removing addition is needed.
    """
    p = cs.modulus
    s_lc, v_lc = _lc(cs, s), _lc(cs, v)
    with cs.region("b_gate"):
        b = cs.allocate(AUXILIARY, name="b", compute=lambda ctx: ctx[s_lc] * ctx[v_lc] % p)
        cs.enforce(s_lc, v_lc, b)
    acc0, A = _start(cs, curve)
    with cs.region("bG"):
        bits_b = gadget_unpack(cs, b, BALANCE_BITS)
        acc, off_b = _accumulate(cs, curve, bits_b, curve.G, acc0)
    with cs.region("rH"):
        bits_r = gadget_unpack(cs, r, BLIND_BITS, raw_r)
        acc, off_r = _accumulate(cs, curve, bits_r, curve.H, acc)
    with cs.region("accumulator"):
        return gadget_point_add(cs, acc, _const_point(cs, -(A + off_b + off_r)), out)


# -- whole circuits -----------------------------------------------------------------------


def _raw_input(name, modulus):
    return lambda ctx: int(ctx.inputs[name]) % int(modulus)


def build_poa_circuit(mode: str = PAPER, profile=None, commitment_only: bool = False) -> ConstraintSystem:
    """The sealed proof-of-assets circuit.

    Public wires, in order: one, y.x, y.y, v, c.x, c.y.  ``commitment_only``
    drops the key check and fixes ``s = 0`` (the circuit for addresses the
    prover does not own); it keeps the same public layout.

    Witness inputs by name: ``x`` and ``r`` as raw integers, plus the public
    values ``y.x``, ``y.y``, ``v``.  The commitment wires are computed.
    """
    if mode not in MODES:
        raise ValueError("unknown circuit mode %r" % mode)
    if profile is None or isinstance(profile, str):
        profile = load_profile(profile or "standard")
    curve = profile.inner
    order = curve.order
    cs = ConstraintSystem(profile.scalar_field)
    yx, yy, v, cx, cy = (cs.allocate(PUBLIC, name=n) for n in PUBLIC_NAMES)
    r = cs.allocate(AUXILIARY, name="r", compute=_raw_input("r", order))
    if commitment_only:
        s = 0
    else:
        x = cs.allocate(AUXILIARY, name="x", compute=_raw_input("x", order))
        with cs.region("C_MUL"):
            y_prime = gadget_scalar_mul(cs, x, curve.G, KEY_BITS, raw=_raw_input("x", order))
        with cs.region("C_CMP"):
            s = gadget_compare(cs, y_prime, PointWires(yx.lc, yy.lc), mode)
    with cs.region("C_PED"):
        gadget_pedersen(cs, s, v, r, curve, out=(cx, cy), raw_r=_raw_input("r", order))
    return cs.seal()


def poa_inputs(instance: PoaInstance, witness: PoaWitness | None = None, blind: int | None = None) -> dict:
    """Named inputs for :meth:`ConstraintSystem.generate_assignment`."""
    x, y = instance.y.xy
    inputs = {"y.x": int(x), "y.y": int(y), "v": int(instance.v)}
    if witness is not None:
        inputs["x"] = int(witness.x)
        inputs["r"] = int(witness.r)
    elif blind is not None:
        inputs["r"] = int(blind)
    return inputs


def circuit_variants(profile=None) -> dict:
    """Every shipped circuit keyed by ``(mode, commitment_only)``."""
    return {
        (PAPER, False): build_poa_circuit(PAPER, profile),
        (HARDENED, False): build_poa_circuit(HARDENED, profile),
        (PAPER, True): build_poa_circuit(PAPER, profile, commitment_only=True),
    }


def public_vector(y: InnerPoint, v: int, c: InnerPoint) -> list:
    """Public input vector ``(1, y.x, y.y, v, c.x, c.y)``."""
    if y.is_identity() or c.is_identity():
        raise ValueError("the identity has no affine coordinates")
    return [1, int(y.xy[0]), int(y.xy[1]), int(v), int(c.xy[0]), int(c.xy[1])]


__all__ = [
    "BitVector",
    "HARDENED",
    "MODES",
    "PAPER",
    "PointWires",
    "PoaInstance",
    "PoaWitness",
    "Variable",
    "build_poa_circuit",
    "circuit_variants",
    "gadget_compare",
    "gadget_pedersen",
    "gadget_point_add",
    "gadget_scalar_mul",
    "gadget_unpack",
    "poa_inputs",
    "public_vector",
    "window_table",
]
