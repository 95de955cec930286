"""The inner (statement) curve: keys, addresses and Pedersen commitments.

The curve is defined over the SNARK scalar field so its coordinates are
native circuit values.  On the standard profile this is the prime-order
curve ``y^2 = x^3 - 17`` over the BN254 scalar field, whose group order is
the BN254 base prime.

Second generators are derived by try-and-increment: ``x0 = SHA-256(seed ||
label || ctr) mod p``; step ``x`` by one until ``x^3 + a x + b`` is a square;
take the even square root as ``y``; multiply by the cofactor and accept if
the result is not the identity.  Anyone can rerun the derivation, and nobody
learns a discrete log relation to ``G`` along the way.
"""

from __future__ import annotations

import hashlib

from gmpy2 import invert, mpz

from ..algebra import FieldElement, PrimeField
from ..errors import ParseError, SubgroupError


class InnerCurve:
    def __init__(self, name, field: PrimeField, a, b, order, generator, seed: bytes, cofactor=1):
        self.name = name
        self.field = field
        self.p = field.modulus
        self.a = mpz(a) % self.p
        self.b = mpz(b) % self.p
        self.order = mpz(order)
        self.cofactor = cofactor
        self.seed = seed
        if (4 * self.a**3 + 27 * self.b**2) % self.p == 0:
            raise ValueError("singular curve")
        self.G = InnerPoint(self, (mpz(generator[0]), mpz(generator[1])))
        if not self.G.is_on_curve():
            raise ValueError("generator is not on the curve")
        self.O = InnerPoint(self, None)
        self._H = None
        self.coord_bytes = field.nbytes

    def __repr__(self):
        return "InnerCurve(%s)" % self.name

    @property
    def H(self) -> "InnerPoint":
        """Second Pedersen generator, derived from the seed."""
        if self._H is None:
            self._H = self.hash_to_point(b"H")
        return self._H

    def point(self, x, y) -> "InnerPoint":
        P = InnerPoint(self, (mpz(int(x)) % self.p, mpz(int(y)) % self.p))
        if not P.is_on_curve():
            raise SubgroupError("(%d, %d) is not on %s" % (int(x), int(y), self.name))
        return P

    def rhs(self, x):
        return (x * x * x + self.a * x + self.b) % self.p

    def hash_to_point(self, label: bytes) -> "InnerPoint":
        ctr = 0
        while True:
            digest = hashlib.sha256(self.seed + label + ctr.to_bytes(4, "big")).digest()
            x = mpz(int.from_bytes(digest, "big")) % self.p
            while True:
                y = self.field.sqrt(self.rhs(x))
                if y is not None:
                    break
                x = (x + 1) % self.p
            if y % 2:
                y = self.p - y
            P = InnerPoint(self, (x, y % self.p))
            if self.cofactor != 1:
                P = P * self.cofactor
            if not P.is_identity() and (P * self.order).is_identity():
                return P
            ctr += 1

    # -- raw affine arithmetic (None is the identity) ------------------------
    def add_raw(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        x1, y1 = P
        x2, y2 = Q
        if x1 == x2:
            if (y1 + y2) % p == 0:
                return None
            m = (3 * x1 * x1 + self.a) * invert(2 * y1, p) % p
        else:
            m = (y2 - y1) * invert(x2 - x1, p) % p
        x3 = (m * m - x1 - x2) % p
        return (x3, (m * (x1 - x3) - y1) % p)

    def neg_raw(self, P):
        return None if P is None else (P[0], (-P[1]) % self.p)

    def mul_raw(self, P, k):
        """Left-to-right double-and-add."""
        k = int(k)
        if k < 0:
            P, k = self.neg_raw(P), -k
        R = None
        for bit in bin(k)[2:] if k else "":
            R = self.add_raw(R, R)
            if bit == "1":
                R = self.add_raw(R, P)
        return R

    def pedersen_commit(self, m, blind) -> "InnerPoint":
        """c = m G + blind H."""
        return self.G * (int(m) % int(self.order)) + self.H * (int(blind) % int(self.order))

    def pedersen_open(self, c: "InnerPoint", m, blind) -> bool:
        return self.pedersen_commit(m, blind) == c


class InnerPoint:
    __slots__ = ("curve", "xy")

    def __init__(self, curve: InnerCurve, xy):
        self.curve = curve
        self.xy = xy

    @property
    def infinity(self) -> bool:
        return self.xy is None

    def is_identity(self) -> bool:
        return self.xy is None

    @property
    def x(self) -> FieldElement:
        return FieldElement(self.xy[0], self.curve.field)

    @property
    def y(self) -> FieldElement:
        return FieldElement(self.xy[1], self.curve.field)

    def is_on_curve(self) -> bool:
        if self.xy is None:
            return True
        x, y = self.xy
        c = self.curve
        return 0 <= x < c.p and 0 <= y < c.p and (y * y - c.rhs(x)) % c.p == 0

    def __add__(self, other):
        return InnerPoint(self.curve, self.curve.add_raw(self.xy, other.xy))

    def __neg__(self):
        return InnerPoint(self.curve, self.curve.neg_raw(self.xy))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return InnerPoint(self.curve, self.curve.mul_raw(self.xy, k))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, InnerPoint) and self.curve is other.curve and self.xy == other.xy

    def __hash__(self):
        return hash(self.xy)

    def __repr__(self):
        if self.xy is None:
            return "InnerPoint(O)"
        return "InnerPoint(%d, %d)" % tuple(map(int, self.xy))

    def to_bytes(self, compressed=True) -> bytes:
        w = self.curve.coord_bytes
        if self.xy is None:
            return bytes(w + 1) if compressed else bytes(2 * w)
        x, y = self.xy
        if compressed:
            return bytes([2 + int(y % 2)]) + int(x).to_bytes(w, "big")
        return int(x).to_bytes(w, "big") + int(y).to_bytes(w, "big")

    @classmethod
    def from_bytes(cls, curve: InnerCurve, data: bytes, offset=0) -> "InnerPoint":
        w = curve.coord_bytes
        p = curve.p
        if len(data) == w + 1:
            prefix = data[0]
            x = mpz(int.from_bytes(data[1:], "big"))
            if prefix == 0:
                if x:
                    raise ParseError("malformed identity encoding", offset)
                return curve.O
            if prefix not in (2, 3):
                raise ParseError("bad point prefix byte 0x%02x" % prefix, offset)
            if x >= p:
                raise ParseError("x-coordinate not canonical", offset + 1)
            y = curve.field.sqrt(curve.rhs(x))
            if y is None:
                raise SubgroupError("compressed point is not on %s" % curve.name)
            if y % 2 != prefix - 2:
                y = (p - y) % p
            return cls(curve, (x, y))
        if len(data) == 2 * w:
            x = mpz(int.from_bytes(data[:w], "big"))
            y = mpz(int.from_bytes(data[w:], "big"))
            if x == 0 and y == 0:
                return curve.O
            if x >= p or y >= p:
                raise ParseError("coordinate not canonical", offset)
            P = cls(curve, (x, y))
            if not P.is_on_curve():
                raise SubgroupError("point is not on %s" % curve.name)
            return P
        raise ParseError("inner point encoding must be %d or %d bytes" % (w + 1, 2 * w), offset)


def inner_add(P: InnerPoint, Q: InnerPoint) -> InnerPoint:
    return P + Q


def inner_scalar_mul(k, P: InnerPoint) -> InnerPoint:
    return P * k


def pedersen_commit(curve: InnerCurve, m, blind) -> InnerPoint:
    return curve.pedersen_commit(m, blind)
