"""BN-family pairing-friendly curves: G1, G2 on the sextic twist, optimal ate pairing.

The engine is generic in the BN parameter ``u`` so the same code runs the
~128-bit production curve and a tiny ``u = 1`` curve (p = 103, r = 97) that
makes exhaustive bilinearity tests possible.

Points are affine throughout.  gmpy2 inversion is cheap enough that affine
chord/tangent formulas beat projective ones in CPython.
"""

from __future__ import annotations

import hashlib

from gmpy2 import invert, mpz

from ..algebra import PrimeField
from ..errors import ParseError, SubgroupError
from .tower import ONE, ZERO, Tower

_FLAG_INF = 0x80
_FLAG_SIGN = 0x40


def bn_prime(u):
    return 36 * u**4 + 36 * u**3 + 24 * u**2 + 6 * u + 1


def bn_order(u):
    return 36 * u**4 + 36 * u**3 + 18 * u**2 + 6 * u + 1


def _naf(k):
    digits = []
    while k > 0:
        if k & 1:
            d = 2 - (k % 4)
            k -= d
        else:
            d = 0
        digits.append(d)
        k >>= 1
    return digits


class BNCurve:
    """Pairing groups of a BN curve ``y^2 = x^3 + b`` with a D-type sextic twist."""

    def __init__(self, name, u, b, xi, g1, g2=None):
        if u <= 0:
            raise ValueError("only positive BN parameters are supported")
        self.name = name
        self.u = u
        self.p = p = mpz(bn_prime(u))
        self.r = mpz(bn_order(u))
        self.fq = PrimeField(p, name + "/Fq")
        self.fr = PrimeField(self.r, name + "/Fr")
        self.tower = T = Tower(p, xi)
        self.b = mpz(b) % p
        self.b2 = T.f2_mul((self.b, ZERO), T.f2_inv(T.xi))
        self.g2_cofactor = 2 * p - self.r
        # twist frobenius: (x, y) -> (conj(x) * xi^((p-1)/3), conj(y) * xi^((p-1)/2))
        self._psi_x = T.f2_pow(T.xi, (p - 1) // 3)
        self._psi_y = T.f2_pow(T.xi, (p - 1) // 2)
        self._ate_naf = _naf(6 * u + 2)
        self.coord_bytes = (int(p).bit_length() + 2 + 7) // 8
        self.g1 = G1Point(self, (mpz(g1[0]), mpz(g1[1])))
        if not self.g1_on_curve(self.g1.xy):
            raise ValueError("G1 generator is not on the curve")
        if g2 is None:
            g2 = self.g2_hash(b"zkpoa/g2-generator/" + name.encode())
        else:
            g2 = ((mpz(g2[0][0]), mpz(g2[0][1])), (mpz(g2[1][0]), mpz(g2[1][1])))
        self.g2 = G2Point(self, g2)
        self.check_g2(g2)
        self.gt_one = GTElement(self, T.f12_one)
        self._g2_prepared = None

    def __repr__(self):
        return "BNCurve(%s)" % self.name

    # -- G1 -----------------------------------------------------------------
    def g1_on_curve(self, P):
        if P is None:
            return True
        p = self.p
        x, y = P
        return 0 <= x < p and 0 <= y < p and (y * y - x * x * x - self.b) % p == 0

    def g1_add(self, P, Q):
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
            lam = 3 * x1 * x1 * invert(2 * y1, p) % p
        else:
            lam = (y2 - y1) * invert(x2 - x1, p) % p
        x3 = (lam * lam - x1 - x2) % p
        return (x3, (lam * (x1 - x3) - y1) % p)

    def g1_neg(self, P):
        if P is None:
            return None
        return (P[0], (-P[1]) % self.p)

    def g1_mul(self, P, k):
        return _window_mul(self.g1_add, self.g1_neg, P, int(k) % int(self.r))

    # -- G2 (points on the twist over Fp2) -----------------------------------
    def g2_on_curve(self, Q):
        if Q is None:
            return True
        T = self.tower
        x, y = Q
        p = self.p
        if not all(0 <= c < p for c in (*x, *y)):
            return False
        return T.f2_sqr(y) == T.f2_add(T.f2_mul(T.f2_sqr(x), x), self.b2)

    def g2_add(self, P, Q):
        if P is None:
            return Q
        if Q is None:
            return P
        p = self.p
        (x10, x11), (y10, y11) = P
        (x20, x21), (y20, y21) = Q
        if x10 == x20 and x11 == x21:
            if (y10 + y20) % p == 0 and (y11 + y21) % p == 0:
                return None
            # lam = 3 x^2 / (2 y)
            n0 = 3 * (x10 + x11) * (x10 - x11)
            n1 = 6 * x10 * x11
            d0, d1 = 2 * y10, 2 * y11
        else:
            n0, n1 = y20 - y10, y21 - y11
            d0, d1 = x20 - x10, x21 - x11
        t = invert((d0 * d0 + d1 * d1) % p, p)
        i0, i1 = d0 * t % p, -d1 * t % p
        l0 = (n0 * i0 - n1 * i1) % p
        l1 = (n0 * i1 + n1 * i0) % p
        x30 = ((l0 + l1) * (l0 - l1) - x10 - x20) % p
        x31 = (2 * l0 * l1 - x11 - x21) % p
        dx0, dx1 = x10 - x30, x11 - x31
        y30 = (l0 * dx0 - l1 * dx1 - y10) % p
        y31 = (l0 * dx1 + l1 * dx0 - y11) % p
        return ((x30, x31), (y30, y31))

    def g2_neg(self, Q):
        if Q is None:
            return None
        return (Q[0], self.tower.f2_neg(Q[1]))

    def g2_mul(self, Q, k):
        return _window_mul(self.g2_add, self.g2_neg, Q, int(k) % int(self.r))

    def g2_mul_unreduced(self, Q, k):
        return _window_mul(self.g2_add, self.g2_neg, Q, int(k))

    def check_g2(self, Q):
        if not self.g2_on_curve(Q):
            raise SubgroupError("point is not on the G2 twist")
        if Q is not None and self.g2_mul_unreduced(Q, self.r) is not None:
            raise SubgroupError("point is not in the order-r subgroup of G2")

    def check_g1(self, P):
        # the BN G1 cofactor is one, so on-curve means in-subgroup
        if not self.g1_on_curve(P):
            raise SubgroupError("point is not on G1")

    def g2_frobenius(self, Q):
        T = self.tower
        x, y = Q
        return (T.f2_mul(T.f2_conj(x), self._psi_x), T.f2_mul(T.f2_conj(y), self._psi_y))

    def g2_hash(self, seed: bytes):
        """Deterministic point of order r on the twist (try-and-increment)."""
        T = self.tower
        p = self.p
        ctr = 0
        while True:
            h = hashlib.sha256(seed + ctr.to_bytes(4, "big")).digest()
            x = (mpz(int.from_bytes(h[:16], "big")) % p, mpz(int.from_bytes(h[16:], "big")) % p)
            ctr += 1
            rhs = T.f2_add(T.f2_mul(T.f2_sqr(x), x), self.b2)
            y = T.f2_sqrt(rhs)
            if y is None:
                continue
            Q = self.g2_mul_unreduced((x, y), self.g2_cofactor)
            if Q is not None:
                return Q

    # -- pairing ------------------------------------------------------------
    def prepare(self, Q):
        """Line coefficients (is_double, lam, c) of the Miller loop for ``Q``."""
        if Q is None:
            return None
        T = self.tower
        mul, sub, sqr, inv = T.f2_mul, T.f2_sub, T.f2_sqr, T.f2_inv
        lines = []

        def step(R, S, double):
            xr, yr = R
            if double:
                lam = mul(T.f2_scale(sqr(xr), 3), inv(T.f2_scale(yr, 2)))
                xs = xr
            else:
                xs, ys = S
                lam = mul(sub(ys, yr), inv(sub(xs, xr)))
            c = sub(mul(lam, xr), yr)
            x3 = sub(sub(sqr(lam), xr), xs)
            y3 = sub(mul(lam, sub(xr, x3)), yr)
            lines.append((double, lam, c))
            return (x3, y3)

        negQ = self.g2_neg(Q)
        R = Q
        naf = self._ate_naf
        for i in range(len(naf) - 2, -1, -1):
            R = step(R, None, True)
            if naf[i] == 1:
                R = step(R, Q, False)
            elif naf[i] == -1:
                R = step(R, negQ, False)
        Q1 = self.g2_frobenius(Q)
        Q2 = self.g2_neg(self.g2_frobenius(Q1))
        R = step(R, Q1, False)
        step(R, Q2, False)
        return lines

    def miller_loop(self, pairs):
        """Product of Miller loops for ``(P, prepared_Q)`` pairs of raw points."""
        T = self.tower
        p = self.p
        active = [(P, lines) for P, lines in pairs if P is not None and lines is not None]
        f = T.f12_one
        if not active:
            return f
        n = len(active[0][1])
        sqr, mbl = T.f12_sqr, T.f12_mul_by_line
        for idx in range(n):
            if active[0][1][idx][0] and idx:
                f = sqr(f)
            for (xp, yp), lines in active:
                _, (l0, l1), c = lines[idx]
                f = mbl(f, yp, ((-l0 * xp) % p, (-l1 * xp) % p), c)
        return f

    def _exp_by_neg_u(self, f):
        T = self.tower
        return T.f12_conj(T.f12_pow(f, self.u))

    def final_exponentiation(self, f):
        T = self.tower
        # easy part: f^((p^6 - 1)(p^2 + 1))
        f = T.f12_mul(T.f12_conj(f), T.f12_inv(f))
        f = T.f12_mul(T.f12_frobenius(f, 2), f)
        # hard part: addition chain in u (computes a fixed power of (p^4-p^2+1)/r)
        mul, sqr, conj, frob = T.f12_mul, T.f12_sqr, T.f12_conj, T.f12_frobenius
        a = self._exp_by_neg_u(f)
        b = sqr(a)
        c = sqr(b)
        d = mul(c, b)
        e = self._exp_by_neg_u(d)
        f2 = sqr(e)
        g = self._exp_by_neg_u(f2)
        h = conj(d)
        i = conj(g)
        j = mul(i, e)
        k = mul(j, h)
        l = mul(k, b)
        m = mul(k, e)
        n = mul(m, f)
        o = frob(l, 1)
        q = mul(o, n)
        r = frob(k, 2)
        s = mul(r, q)
        t = conj(f)
        t = mul(t, l)
        t = frob(t, 3)
        return mul(t, s)

    def pairing(self, P: "G1Point", Q: "G2Point") -> "GTElement":
        self.check_g1(P.xy)
        self.check_g2(Q.xy)
        f = self.miller_loop([(P.xy, self.prepare(Q.xy))])
        return GTElement(self, self.final_exponentiation(f))

    def pairing_product(self, pairs) -> "GTElement":
        """prod e(P_i, Q_i) sharing one final exponentiation.

        ``pairs`` holds ``(G1Point, G2Point | PreparedG2)``; subgroup checks
        are the caller's job here.
        """
        raw = []
        for P, Q in pairs:
            lines = Q.lines if isinstance(Q, PreparedG2) else self.prepare(Q.xy)
            raw.append((P.xy, lines))
        return GTElement(self, self.final_exponentiation(self.miller_loop(raw)))


class PreparedG2:
    """Cached Miller-loop lines for a fixed G2 point."""

    __slots__ = ("point", "lines")

    def __init__(self, point: "G2Point"):
        self.point = point
        self.lines = point.curve.prepare(point.xy)


def _window_mul(add, neg, P, k, width=4):
    if P is None or k == 0:
        return None
    table = [None, P]
    for _ in range(2, 1 << width):
        table.append(add(table[-1], P))
    digits = []
    while k:
        digits.append(k & ((1 << width) - 1))
        k >>= width
    R = None
    for d in reversed(digits):
        for _ in range(width):
            R = add(R, R)
        if d:
            R = add(R, table[d])
    return R


def _fp_sign(v, p):
    return v > (p - 1) // 2


class G1Point:
    __slots__ = ("curve", "xy")

    def __init__(self, curve: BNCurve, xy):
        self.curve = curve
        self.xy = xy

    @classmethod
    def identity(cls, curve):
        return cls(curve, None)

    def is_identity(self):
        return self.xy is None

    def __add__(self, other):
        return G1Point(self.curve, self.curve.g1_add(self.xy, other.xy))

    def __neg__(self):
        return G1Point(self.curve, self.curve.g1_neg(self.xy))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return G1Point(self.curve, self.curve.g1_mul(self.xy, k))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, G1Point) and self.xy == other.xy

    def __hash__(self):
        return hash(self.xy)

    def __repr__(self):
        if self.xy is None:
            return "G1(O)"
        return "G1(%d, %d)" % tuple(map(int, self.xy))

    def is_valid(self):
        return self.curve.g1_on_curve(self.xy)

    def to_bytes(self, compressed=True) -> bytes:
        c = self.curve
        w = c.coord_bytes
        if self.xy is None:
            out = bytearray(w if compressed else 2 * w)
            out[0] = _FLAG_INF
            return bytes(out)
        x, y = self.xy
        if compressed:
            out = bytearray(int(x).to_bytes(w, "big"))
            if _fp_sign(y, c.p):
                out[0] |= _FLAG_SIGN
            return bytes(out)
        return int(x).to_bytes(w, "big") + int(y).to_bytes(w, "big")

    @classmethod
    def from_bytes(cls, curve: BNCurve, data: bytes, offset=0) -> "G1Point":
        w = curve.coord_bytes
        p = curve.p
        if len(data) not in (w, 2 * w):
            raise ParseError("G1 encoding must be %d or %d bytes" % (w, 2 * w), offset)
        flags = data[0] & (_FLAG_INF | _FLAG_SIGN)
        body = bytes([data[0] & 0x3F]) + data[1:]
        if flags & _FLAG_INF:
            if any(body) or flags & _FLAG_SIGN:
                raise ParseError("malformed G1 identity", offset)
            return cls(curve, None)
        x = mpz(int.from_bytes(body[:w], "big"))
        if x >= p:
            raise ParseError("G1 x-coordinate not canonical", offset)
        if len(data) == w:
            y = curve.fq.sqrt(x * x * x + curve.b)
            if y is None:
                raise SubgroupError("compressed G1 point is not on the curve")
            if _fp_sign(y, p) != bool(flags & _FLAG_SIGN):
                y = (-y) % p
        else:
            if flags & _FLAG_SIGN:
                raise ParseError("sign flag set on uncompressed G1 point", offset)
            y = mpz(int.from_bytes(body[w:], "big"))
            if y >= p:
                raise ParseError("G1 y-coordinate not canonical", offset)
        pt = (x, y)
        curve.check_g1(pt)
        return cls(curve, pt)


class G2Point:
    __slots__ = ("curve", "xy")

    def __init__(self, curve: BNCurve, xy):
        self.curve = curve
        self.xy = xy

    @classmethod
    def identity(cls, curve):
        return cls(curve, None)

    def is_identity(self):
        return self.xy is None

    def __add__(self, other):
        return G2Point(self.curve, self.curve.g2_add(self.xy, other.xy))

    def __neg__(self):
        return G2Point(self.curve, self.curve.g2_neg(self.xy))

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k):
        return G2Point(self.curve, self.curve.g2_mul(self.xy, k))

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, G2Point) and self.xy == other.xy

    def __hash__(self):
        return hash(self.xy)

    def __repr__(self):
        if self.xy is None:
            return "G2(O)"
        (a, b), (c, d) = self.xy
        return "G2((%d, %d), (%d, %d))" % (a, b, c, d)

    def is_valid(self):
        try:
            self.curve.check_g2(self.xy)
        except SubgroupError:
            return False
        return True

    def _sign(self, y):
        p = self.curve.p
        return _fp_sign(y[1], p) if y[1] else _fp_sign(y[0], p)

    def to_bytes(self, compressed=True) -> bytes:
        c = self.curve
        w = c.coord_bytes
        n = 2 * w if compressed else 4 * w
        if self.xy is None:
            out = bytearray(n)
            out[0] = _FLAG_INF
            return bytes(out)
        (x0, x1), (y0, y1) = self.xy
        xb = int(x1).to_bytes(w, "big") + int(x0).to_bytes(w, "big")
        if compressed:
            out = bytearray(xb)
            if self._sign((y0, y1)):
                out[0] |= _FLAG_SIGN
            return bytes(out)
        return xb + int(y1).to_bytes(w, "big") + int(y0).to_bytes(w, "big")

    @classmethod
    def from_bytes(cls, curve: BNCurve, data: bytes, offset=0, check_subgroup=True) -> "G2Point":
        w = curve.coord_bytes
        p = curve.p
        T = curve.tower
        if len(data) not in (2 * w, 4 * w):
            raise ParseError("G2 encoding must be %d or %d bytes" % (2 * w, 4 * w), offset)
        flags = data[0] & (_FLAG_INF | _FLAG_SIGN)
        body = bytes([data[0] & 0x3F]) + data[1:]
        if flags & _FLAG_INF:
            if any(body) or flags & _FLAG_SIGN:
                raise ParseError("malformed G2 identity", offset)
            return cls(curve, None)
        words = [mpz(int.from_bytes(body[i:i + w], "big")) for i in range(0, len(body), w)]
        if any(v >= p for v in words):
            raise ParseError("G2 coordinate not canonical", offset)
        x = (words[1], words[0])
        if len(data) == 2 * w:
            y = T.f2_sqrt(T.f2_add(T.f2_mul(T.f2_sqr(x), x), curve.b2))
            if y is None:
                raise SubgroupError("compressed G2 point is not on the twist")
            pt = cls(curve, (x, y))
            if pt._sign(y) != bool(flags & _FLAG_SIGN):
                y = T.f2_neg(y)
        else:
            if flags & _FLAG_SIGN:
                raise ParseError("sign flag set on uncompressed G2 point", offset)
            y = (words[3], words[2])
        if check_subgroup:
            curve.check_g2((x, y))
        elif not curve.g2_on_curve((x, y)):
            raise SubgroupError("point is not on the G2 twist")
        return cls(curve, (x, y))


class GTElement:
    """Element of the order-r subgroup of Fp12^*, written multiplicatively."""

    __slots__ = ("curve", "value")

    def __init__(self, curve: BNCurve, value):
        self.curve = curve
        self.value = value

    def __mul__(self, other):
        return GTElement(self.curve, self.curve.tower.f12_mul(self.value, other.value))

    def __truediv__(self, other):
        return self * other.inverse()

    def inverse(self):
        # unitary: inverse is the conjugate
        return GTElement(self.curve, self.curve.tower.f12_conj(self.value))

    def __pow__(self, e):
        e = int(e) % int(self.curve.r)
        return GTElement(self.curve, self.curve.tower.f12_pow(self.value, e))

    def __eq__(self, other):
        return isinstance(other, GTElement) and self.value == other.value

    def __hash__(self):
        return hash(self.value)

    def is_identity(self):
        return self.value == self.curve.tower.f12_one

    def __repr__(self):
        return "GT(identity)" if self.is_identity() else "GT(...)"


__all__ = [
    "BNCurve",
    "G1Point",
    "G2Point",
    "GTElement",
    "PreparedG2",
    "ONE",
]
