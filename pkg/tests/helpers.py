"""Small circuits and independent oracles shared by the test modules."""

from __future__ import annotations

from zkpoa.r1cs import AUXILIARY, PUBLIC, ConstraintSystem


def cubic_circuit(field):
    """x^3 + x + 5 = out, three constraints, one public output."""
    p = int(field.modulus)
    cs = ConstraintSystem(field)
    out = cs.allocate(PUBLIC, name="out", compute=lambda ctx: (ctx.inputs["x"] ** 3 + ctx.inputs["x"] + 5) % p)
    x = cs.allocate(AUXILIARY, name="x", compute=lambda ctx: ctx.inputs["x"] % p)
    x2 = cs.allocate(AUXILIARY, name="x2", compute=lambda ctx: ctx[x] * ctx[x] % p)
    x3 = cs.allocate(AUXILIARY, name="x3", compute=lambda ctx: ctx[x2] * ctx[x] % p)
    cs.enforce(x, x, x2)
    cs.enforce(x2, x, x3)
    cs.enforce(x3 + x + 5, cs.one, out)
    return cs.seal()


def square_circuit(field):
    """y = x^2 with y public and x private."""
    cs = ConstraintSystem(field)
    y = cs.allocate(PUBLIC, name="y")
    x = cs.allocate(AUXILIARY, name="x")
    cs.enforce(x, x, y)
    return cs.seal()


def random_circuit(field, rng, num_constraints, num_public=2, num_inputs=2, density=3):
    """A satisfiable random R1CS: each constraint defines one fresh product wire.

    Free inputs are named ``p0..`` (public) and ``a0..`` (private); returns
    ``(cs, input_names)``.
    """
    p = int(field.modulus)
    cs = ConstraintSystem(field)
    wires = [cs.one]
    names = []
    for i in range(num_public):
        wires.append(cs.allocate(PUBLIC, name="p%d" % i))
        names.append("p%d" % i)
    for i in range(num_inputs):
        wires.append(cs.allocate(AUXILIARY, name="a%d" % i))
        names.append("a%d" % i)

    def rand_lc():
        lc = cs.lc(0)
        for _ in range(1 + rng.randbelow(density)):
            lc = lc + wires[rng.randbelow(len(wires))] * (1 + rng.randbelow(p - 1))
        return lc

    for j in range(num_constraints):
        a, b = rand_lc(), rand_lc()
        w = cs.allocate(AUXILIARY, name="w%d" % j, compute=lambda ctx, a=a, b=b: ctx[a] * ctx[b] % p)
        cs.enforce(a, b, w)
        wires.append(w)
    return cs.seal(), names


def random_inputs(names, field, rng):
    return {n: rng.randbelow(int(field.modulus)) for n in names}


def dense_matrices(cs):
    """Dense A, B, C matrices (rows = constraints, columns = wires)."""
    m = cs.num_wires
    mats = []
    for which in ("a", "b", "c"):
        rows = []
        for con in cs.constraints:
            row = [0] * m
            for i, coef in getattr(con, which).items():
                row[i] = int(coef)
            rows.append(row)
        mats.append(rows)
    return mats


def dense_satisfied(cs, values):
    """Evaluate (A t) * (B t) == C t row by row with plain integers."""
    p = int(cs.field.modulus)
    t = [int(v) for v in values]
    A, B, C = dense_matrices(cs)
    for ra, rb, rc in zip(A, B, C):
        dot = lambda row: sum(x * y for x, y in zip(row, t)) % p
        if dot(ra) * dot(rb) % p != dot(rc):
            return False
    return True


def egcd_inverse(a, p):
    """Modular inverse by the extended Euclidean algorithm."""
    r0, r1 = p, a % p
    s0, s1 = 0, 1
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ZeroDivisionError(a)
    return s0 % p


def naive_mul(add, P, k):
    """k P by repeated addition (small k only)."""
    R = None
    for _ in range(k):
        R = add(R, P)
    return R
