import pytest
from hypothesis import given, strategies as st

from zkpoa import groth16
from zkpoa.curves import inner_add, inner_scalar_mul, load_profile
from zkpoa.errors import ExceptionalPointError, NotSatisfiedError
from zkpoa.gadgets import (
    HARDENED,
    MAX_BALANCE,
    PAPER,
    PoaInstance,
    PoaWitness,
    PointWires,
    build_poa_circuit,
    circuit_variants,
    gadget_compare,
    gadget_pedersen,
    gadget_point_add,
    gadget_scalar_mul,
    gadget_unpack,
    poa_inputs,
)
from zkpoa.r1cs import AUXILIARY, PUBLIC, ConstraintSystem

STD = load_profile("standard")
FR = STD.scalar_field
INNER = STD.inner
ORDER = int(INNER.order)


def _raw(name):
    return lambda ctx: int(ctx.inputs[name])


@pytest.fixture(scope="module")
def unpack_cs():
    cs = ConstraintSystem(FR)
    x = cs.allocate(AUXILIARY, name="x")
    bits = gadget_unpack(cs, x, 256)
    return cs.seal(), bits


@pytest.fixture(scope="module")
def add_cs():
    cs = ConstraintSystem(FR)
    P = PointWires(*(cs.allocate(AUXILIARY, name=n).lc for n in ("px", "py")))
    Q = PointWires(*(cs.allocate(AUXILIARY, name=n).lc for n in ("qx", "qy")))
    R = gadget_point_add(cs, P, Q)
    return cs.seal(), R


@pytest.fixture(scope="module")
def mul_cs():
    cs = ConstraintSystem(FR)
    x = cs.allocate(AUXILIARY, name="x", compute=lambda ctx: int(ctx.inputs["k"]) % int(FR.modulus))
    out = gadget_scalar_mul(cs, x, INNER.G, 256, raw=_raw("k"))
    return cs.seal(), out


def test_unpack_count(unpack_cs):
    cs, bits = unpack_cs
    assert cs.num_constraints == 257
    assert len(bits) == 256


def test_unpack_zero_and_round_trip(unpack_cs, rng):
    cs, bits = unpack_cs
    t = cs.generate_assignment({"x": 0})
    assert all(t[b.index] == 0 for b in bits)
    for _ in range(1000):
        k = rng.randbelow(int(FR.modulus))
        t = cs.generate_assignment({"x": k})
        assert cs.is_satisfied(t)
        assert sum(int(t[b.index]) << i for i, b in enumerate(bits)) == k


def test_unpack_out_of_range():
    cs = ConstraintSystem(FR)
    x = cs.allocate(AUXILIARY, name="x")
    gadget_unpack(cs, x, 8)
    cs.seal()
    assert cs.num_constraints == 9
    assert not cs.is_satisfied(cs.generate_assignment({"x": 300}))


def test_point_add_count_and_oracle(add_cs, rng):
    cs, R = add_cs
    assert cs.num_constraints == 3
    for _ in range(1000):
        P, Q = INNER.G * rng.nonzero(ORDER), INNER.H * rng.nonzero(ORDER)
        t = cs.generate_assignment({"px": P.xy[0], "py": P.xy[1], "qx": Q.xy[0], "qy": Q.xy[1]})
        assert cs.is_satisfied(t)
        S = INNER.point(*R.value(_ctx(cs, t)))
        assert S == inner_add(P, Q)


def _ctx(cs, t):
    from zkpoa.r1cs import _Context
    return _Context(t.values, {}, cs.modulus)


def test_point_add_exceptional(add_cs):
    cs, _ = add_cs
    P = INNER.G * 5
    for Q in (P, -P):
        with pytest.raises(ExceptionalPointError):
            cs.generate_assignment({"px": P.xy[0], "py": P.xy[1], "qx": Q.xy[0], "qy": Q.xy[1]})


def test_scalar_mul_counts(mul_cs):
    cs, _ = mul_cs
    assert cs.num_constraints == 772
    assert cs.region_counts == {"unpack": 257, "windows": 512, "accumulator": 3}


def test_scalar_mul_one(mul_cs):
    cs, out = mul_cs
    t = cs.generate_assignment({"k": 1})
    assert cs.is_satisfied(t)
    assert INNER.point(*out.value(_ctx(cs, t))) == INNER.G


def test_scalar_mul_oracle(mul_cs, rng):
    cs, out = mul_cs
    for _ in range(1000):
        k = rng.nonzero(ORDER)
        t = cs.generate_assignment({"k": k})
        assert INNER.point(*out.value(_ctx(cs, t))) == inner_scalar_mul(k, INNER.G)
    # satisfaction is the expensive part; spot-check it
    assert cs.is_satisfied(t)


def _compare_cs(mode):
    cs = ConstraintSystem(FR)
    E = PointWires(*(cs.allocate(PUBLIC, name=n).lc for n in ("ex", "ey")))
    C = PointWires(*(cs.allocate(AUXILIARY, name=n).lc for n in ("cx", "cy")))
    s = gadget_compare(cs, C, E, mode)
    return cs.seal(), s


@pytest.mark.parametrize("mode,count", [(PAPER, 2), (HARDENED, 3)])
def test_compare(mode, count):
    cs, s = _compare_cs(mode)
    assert cs.num_constraints == count
    P, Q = INNER.G * 3, INNER.G * 4
    same = cs.generate_assignment({"ex": P.xy[0], "ey": P.xy[1], "cx": P.xy[0], "cy": P.xy[1]})
    diff = cs.generate_assignment({"ex": P.xy[0], "ey": P.xy[1], "cx": Q.xy[0], "cy": Q.xy[1]})
    assert same[s.index] == 1 and cs.is_satisfied(same)
    assert diff[s.index] == 0 and cs.is_satisfied(diff)


def test_pedersen_counts_and_oracle(rng):
    cs = ConstraintSystem(FR)
    v = cs.allocate(PUBLIC, name="v")
    r = cs.allocate(AUXILIARY, name="r", compute=lambda ctx: int(ctx.inputs["rr"]) % int(FR.modulus))
    s = cs.allocate(AUXILIARY, name="s")
    c = gadget_pedersen(cs, s, v, r, INNER, raw_r=_raw("rr"))
    cs.seal()
    assert cs.num_constraints == 928
    assert cs.region_counts == {"b_gate": 1, "bG": 155, "rH": 769, "accumulator": 3}
    for sv in (0, 1):
        for _ in range(5):
            vv, rr = rng.randbelow(MAX_BALANCE + 1), rng.nonzero(ORDER)
            t = cs.generate_assignment({"v": vv, "rr": rr, "s": sv})
            assert cs.is_satisfied(t)
            got = INNER.point(*c.value(_ctx(cs, t)))
            assert got == INNER.pedersen_commit(sv * vv, rr)
            if sv == 0:
                assert got == INNER.H * rr


def test_circuit_goldens():
    variants = circuit_variants(STD)
    paper, hard, comm = variants[PAPER, False], variants[HARDENED, False], variants[PAPER, True]
    assert paper.num_constraints == 1702
    assert hard.num_constraints == 1703
    assert comm.num_constraints == 928
    assert paper.region_counts["C_MUL"] == 772
    assert paper.region_counts["C_CMP"] == 2
    assert hard.region_counts["C_CMP"] == 3
    assert paper.region_counts["C_PED"] == 928
    for cs in variants.values():
        assert cs.num_public == 6
        assert [cs.names[i] for i in range(1, 6)] == ["y.x", "y.y", "v", "c.x", "c.y"]
    assert len({cs.layout_hash for cs in variants.values()}) == 3


@pytest.fixture(scope="module")
def circuits():
    return {m: build_poa_circuit(m, STD) for m in (PAPER, HARDENED)}


def _honest(rng, owned=True):
    x = rng.nonzero(ORDER)
    y = INNER.G * x if owned else INNER.G * rng.nonzero(ORDER)
    inst = PoaInstance(y, rng.randbelow(MAX_BALANCE + 1))
    return inst, PoaWitness(x, int(owned), rng.nonzero(ORDER))


@pytest.mark.parametrize("mode", [PAPER, HARDENED])
def test_honest_satisfies_and_outputs(circuits, rng, mode):
    cs = circuits[mode]
    for owned in (True, False):
        inst, wit = _honest(rng.child(owned), owned)
        t = cs.generate_assignment(poa_inputs(inst, wit))
        assert cs.is_satisfied(t)
        assert t[cs.variable("s").index] == int(owned)
        c = INNER.point(t[4], t[5])
        assert c == INNER.pedersen_commit(int(owned) * inst.v, wit.r)


@pytest.mark.parametrize("mode", [PAPER, HARDENED])
def test_flipped_s_violates(circuits, rng, mode):
    cs = circuits[mode]
    for owned in (True, False):
        inst, wit = _honest(rng.child(owned), owned)
        honest = cs.generate_assignment(poa_inputs(inst, wit))
        # same public statement, ownership bit flipped and everything downstream recomputed
        t = cs.generate_assignment(poa_inputs(inst, wit), overrides={"s": 1 - owned, "c.x": honest[4], "c.y": honest[5]})
        assert not cs.is_satisfied(t)


def test_paper_mode_overclaim_gap(circuits, rng):
    # sx, sy are unconstrained in paper-faithful mode: a prover without the
    # key can set both to one and commit to the full balance
    cs = circuits[PAPER]
    inst, wit = _honest(rng, owned=False)
    t = cs.generate_assignment(poa_inputs(inst, wit), overrides={"sx": 1, "sy": 1})
    assert t[cs.variable("s").index] == 1
    assert cs.is_satisfied(t)
    assert INNER.point(t[4], t[5]) == INNER.pedersen_commit(inst.v, wit.r)


def test_hardened_rejects_overclaim(circuits, rng):
    cs = circuits[HARDENED]
    for i in range(10):
        inst, wit = _honest(rng.child(i), owned=False)
        t = cs.generate_assignment(poa_inputs(inst, wit), overrides={"s": 1})
        assert not cs.is_satisfied(t)
    # targeted: s = 1 together with a wrong key whose product feeds the commitment
    inst, wit = _honest(rng.child("t"), owned=False)
    t = cs.generate_assignment(poa_inputs(inst, wit), overrides={"s": 1, "b": inst.v})
    assert not cs.is_satisfied(t)


def test_balance_range(paper_keys, rng):
    with pytest.raises(ValueError):
        PoaInstance(INNER.G, MAX_BALANCE + 1)
    cs = paper_keys.circuit(0)
    inst, wit = _honest(rng)
    inputs = poa_inputs(inst, wit)
    inputs["v"] = MAX_BALANCE + 1
    t = cs.generate_assignment(inputs)
    assert not cs.is_satisfied(t)
    with pytest.raises(NotSatisfiedError):
        groth16.prove(paper_keys.crs[0], t, rng=rng)


@given(st.integers(min_value=1, max_value=2**256 - 1))
def test_unpack_property(unpack_cs, k):
    cs, bits = unpack_cs
    k %= int(FR.modulus)
    t = cs.generate_assignment({"x": k})
    assert sum(int(t[b.index]) << i for i, b in enumerate(bits)) == k
