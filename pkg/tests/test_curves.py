import hashlib
import itertools

import pytest
from gmpy2 import mpz
from hypothesis import given, strategies as st

from helpers import naive_mul
from zkpoa.algebra import PrimeField
from zkpoa.curves import G1Point, G2Point, InnerCurve, InnerPoint, inner_add, inner_scalar_mul, load_profile, pairing
from zkpoa.errors import ParseError, SubgroupError

STD = load_profile("standard")
TOY = load_profile("toy")
INNER = STD.inner


def _small_curve_with(order):
    """Exhaustive search for a short Weierstrass curve over a small prime with ``order`` points."""
    for p in (11, 13, 17):
        for a, b in itertools.product(range(p), repeat=2):
            if (4 * a**3 + 27 * b**2) % p == 0:
                continue
            pts = [(x, y) for x in range(p) for y in range(p) if (y * y - x**3 - a * x - b) % p == 0]
            if len(pts) + 1 == order:
                return p, a, b, pts
    raise AssertionError("no curve found")


@pytest.fixture(scope="module")
def curve13():
    p, a, b, pts = _small_curve_with(13)
    return InnerCurve("thirteen", PrimeField(p), a, b, 13, pts[0], b"t13"), pts


def _oracle_add(p, a, P, Q):
    # textbook chord and tangent, written out independently
    if P is None:
        return Q
    if Q is None:
        return P
    (x1, y1), (x2, y2) = P, Q
    if x1 == x2 and (y1 + y2) % p == 0:
        return None
    if P == Q:
        m = (3 * x1 * x1 + a) * pow(2 * y1, -1, p) % p
    else:
        m = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (m * m - x1 - x2) % p
    return (x3, (m * (x1 - x3) - y1) % p)


def test_thirteen_point_table(curve13):
    curve, pts = curve13
    p, a = int(curve.p), int(curve.a)
    group = [None] + pts
    raw = lambda P: None if P is None else tuple(int(c) for c in P)
    table = {}
    for P, Q in itertools.product(group, repeat=2):
        R = raw(curve.add_raw(P, Q))
        assert R == _oracle_add(p, a, P, Q)
        assert R is None or R in pts  # closure
        table[P, Q] = R
    for P, Q, S in itertools.product(group, repeat=3):
        assert table[table[P, Q], S] == table[P, table[Q, S]]
    for P in pts:
        assert raw(curve.mul_raw(P, 13)) is None
        assert raw(curve.add_raw(P, P)) == table[P, P]


def test_identity_and_inverse():
    P = INNER.G * 12345
    assert P + INNER.O == P
    assert (P + (-P)).is_identity()
    assert inner_add(P, INNER.O) == P


def test_scalar_mul_edges():
    P = INNER.H
    assert inner_scalar_mul(1, P) == P
    assert inner_scalar_mul(0, P).is_identity()
    assert inner_scalar_mul(INNER.order, P).is_identity()
    assert inner_scalar_mul(5, P) == P + P + P + P + P


def test_scalar_mul_additive_oracle():
    for k in range(1, 40):
        assert (INNER.G * k).xy == naive_mul(INNER.add_raw, INNER.G.xy, k)


def test_group_laws_random(rng):
    order = int(INNER.order)
    for _ in range(1000):
        P, Q, R = (INNER.G * rng.nonzero(order) for _ in range(3))
        assert (P + Q) + R == P + (Q + R)
        assert P + Q == Q + P
        assert (P + Q).is_on_curve()


def test_h_derivation_reproduces():
    p = int(INNER.p)
    # cofactor one and prime order, so the first candidate (counter 0) is taken
    digest = hashlib.sha256(INNER.seed + b"H" + (0).to_bytes(4, "big")).digest()
    x = int.from_bytes(digest, "big") % p
    while pow((x**3 + int(INNER.a) * x + int(INNER.b)) % p, (p - 1) // 2, p) != 1:
        x = (x + 1) % p
    H = INNER.H
    assert int(H.xy[0]) == x
    assert int(H.xy[1]) % 2 == 0
    assert H.is_on_curve() and (H * INNER.order).is_identity()
    # frozen from the derivation above
    assert hex(int(H.xy[0])) == "0x509e5a2d31ef22948957ab81334b98a45d2bb7ecf59cac39175f0e60f7904a5"


def test_curve_cycle():
    assert INNER.p == STD.pairing.r
    assert INNER.order == STD.pairing.p
    assert (INNER.G * INNER.order).is_identity()


# -- pedersen ---------------------------------------------------------------------


def test_pedersen_trivial():
    assert INNER.pedersen_commit(0, 0).is_identity()


def test_pedersen_homomorphic(rng):
    order = int(INNER.order)
    for _ in range(20):
        m1, m2, b1, b2 = (rng.randbelow(order) for _ in range(4))
        lhs = INNER.pedersen_commit(m1, b1) + INNER.pedersen_commit(m2, b2)
        assert lhs == INNER.pedersen_commit(m1 + m2, b1 + b2)


def test_pedersen_open_and_forge(rng):
    order = int(INNER.order)
    for _ in range(20):
        m, b = rng.randbelow(2**51), rng.randbelow(order)
        c = INNER.pedersen_commit(m, b)
        assert INNER.pedersen_open(c, m, b)
        assert not INNER.pedersen_open(c, m + 1 + rng.randbelow(1000), b)


# -- serialization -------------------------------------------------------------


def test_inner_point_encodings(rng):
    for _ in range(20):
        P = INNER.G * rng.nonzero(int(INNER.order))
        assert InnerPoint.from_bytes(INNER, P.to_bytes(True)) == P
        assert InnerPoint.from_bytes(INNER, P.to_bytes(False)) == P
    assert InnerPoint.from_bytes(INNER, INNER.O.to_bytes()).is_identity()
    with pytest.raises(ParseError):
        InnerPoint.from_bytes(INNER, b"\x05" + bytes(32))
    with pytest.raises(ParseError):
        InnerPoint.from_bytes(INNER, bytes(5))


def test_pairing_point_encodings(rng):
    c = STD.pairing
    P, Q = c.g1 * 77, c.g2 * 99
    assert len(P.to_bytes(True)) == 32 and len(P.to_bytes(False)) == 64
    assert len(Q.to_bytes(True)) == 64
    assert G1Point.from_bytes(c, P.to_bytes(True)) == P
    assert G1Point.from_bytes(c, P.to_bytes(False)) == P
    assert G2Point.from_bytes(c, Q.to_bytes(True)) == Q
    assert G2Point.from_bytes(c, Q.to_bytes(False)) == Q


# -- pairing --------------------------------------------------------------------


def test_pairing_identity_and_degeneracy():
    for prof in (TOY, STD):
        c = prof.pairing
        assert pairing(G1Point.identity(c), c.g2).is_identity()
        assert not pairing(c.g1, c.g2).is_identity()
        assert (pairing(c.g1, c.g2) ** c.r).is_identity()


def test_pairing_doubling():
    c = STD.pairing
    e = pairing(c.g1, c.g2)
    assert pairing(c.g1 * 2, c.g2) == e * e
    assert pairing(c.g1, c.g2 * 2) == e * e


def test_bilinearity_toy(rng):
    c = TOY.pairing
    e = pairing(c.g1, c.g2)
    r = int(c.r)
    for _ in range(100):
        a, b = rng.randbelow(r), rng.randbelow(r)
        assert pairing(c.g1 * a, c.g2 * b) == e ** (a * b)


def test_bilinearity_standard(rng):
    c = STD.pairing
    e = pairing(c.g1, c.g2)
    r = int(c.r)
    for _ in range(4):
        a, b = rng.randbelow(r), rng.randbelow(r)
        assert pairing(c.g1 * a, c.g2 * b) == e ** (a * b % r)


def test_pairing_product():
    c = STD.pairing
    prod = c.pairing_product([(c.g1 * 3, c.g2), (c.g1 * 5, c.g2 * 2)])
    assert prod == pairing(c.g1, c.g2) ** 13


def test_toy_g1_order():
    c = TOY.pairing
    assert (c.g1 * c.r).is_identity()
    assert len({(c.g1 * k).xy for k in range(int(c.r))}) == int(c.r)


def test_off_curve_g1_rejected():
    c = STD.pairing
    bogus = G1Point(c, (mpz(1), mpz(1)))
    with pytest.raises(SubgroupError):
        pairing(bogus, c.g2)


def test_off_subgroup_g2_rejected():
    c = TOY.pairing
    T = c.tower
    # a twist point without cofactor clearing lies outside the order-r subgroup
    for x0 in range(int(c.p)):
        x = (mpz(x0), mpz(1))
        y = T.f2_sqrt(T.f2_add(T.f2_mul(T.f2_sqr(x), x), c.b2))
        if y is None:
            continue
        if c.g2_mul_unreduced((x, y), c.r) is not None:
            break
    with pytest.raises(SubgroupError):
        pairing(c.g1, G2Point(c, (x, y)))
    with pytest.raises(SubgroupError):
        G2Point.from_bytes(c, G2Point(c, (x, y)).to_bytes(False))


@given(a=st.integers(min_value=0, max_value=96), b=st.integers(min_value=0, max_value=96))
def test_toy_bilinearity_property(a, b):
    c = TOY.pairing
    assert pairing(c.g1 * a, c.g2 * b) == pairing(c.g1, c.g2) ** (a * b)
