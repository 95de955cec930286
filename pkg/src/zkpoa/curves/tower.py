"""Fp2 / Fp6 / Fp12 tower arithmetic for BN-family pairings.

Elements are nested tuples of gmpy2 integers:

* Fp2  = Fp[i] / (i^2 + 1)               -> (a0, a1)
* Fp6  = Fp2[v] / (v^3 - xi)             -> (c0, c1, c2)
* Fp12 = Fp6[w] / (w^2 - v)              -> (g0, g1)

so ``w^6 = xi``.  Tuples keep the inner loops free of object overhead; the
public GT wrapper lives in :mod:`zkpoa.curves.bn`.
"""

from gmpy2 import invert, mpz

ZERO = mpz(0)
ONE = mpz(1)


class Tower:
    def __init__(self, p, xi):
        if p % 4 != 3:
            raise ValueError("Fp2 = Fp[i]/(i^2+1) needs p = 3 mod 4")
        self.p = p = mpz(p)
        self.xi = (mpz(xi[0]) % p, mpz(xi[1]) % p)
        self.f2_zero = (ZERO, ZERO)
        self.f2_one = (ONE, ZERO)
        self.f6_zero = (self.f2_zero,) * 3
        self.f6_one = (self.f2_one, self.f2_zero, self.f2_zero)
        self.f12_one = (self.f6_one, self.f6_zero)
        # frobenius coefficients xi^(k(p-1)/6), k = 0..5, for the w-basis
        e = (p - 1) // 6
        g = self.f2_pow(self.xi, e)
        self.frob_coeffs = [self.f2_one]
        for _ in range(5):
            self.frob_coeffs.append(self.f2_mul(self.frob_coeffs[-1], g))

    # -- Fp2 ----------------------------------------------------------------
    def f2_add(self, a, b):
        p = self.p
        return ((a[0] + b[0]) % p, (a[1] + b[1]) % p)

    def f2_sub(self, a, b):
        p = self.p
        return ((a[0] - b[0]) % p, (a[1] - b[1]) % p)

    def f2_neg(self, a):
        p = self.p
        return ((-a[0]) % p, (-a[1]) % p)

    def f2_mul(self, a, b):
        p = self.p
        a0, a1 = a
        b0, b1 = b
        return ((a0 * b0 - a1 * b1) % p, (a0 * b1 + a1 * b0) % p)

    def f2_sqr(self, a):
        p = self.p
        a0, a1 = a
        return ((a0 + a1) * (a0 - a1) % p, 2 * a0 * a1 % p)

    def f2_scale(self, a, k):
        p = self.p
        return (a[0] * k % p, a[1] * k % p)

    def f2_mul_xi(self, a):
        p = self.p
        a0, a1 = a
        x0, x1 = self.xi
        return ((a0 * x0 - a1 * x1) % p, (a0 * x1 + a1 * x0) % p)

    def f2_inv(self, a):
        p = self.p
        a0, a1 = a
        norm = (a0 * a0 + a1 * a1) % p
        if norm == 0:
            raise ZeroDivisionError("inverse of zero in Fp2")
        t = invert(norm, p)
        return (a0 * t % p, (-a1) * t % p)

    def f2_conj(self, a):
        return (a[0], (-a[1]) % self.p)

    def f2_pow(self, a, e):
        result = self.f2_one
        base = a
        while e > 0:
            if e & 1:
                result = self.f2_mul(result, base)
            base = self.f2_sqr(base)
            e >>= 1
        return result

    def f2_is_square(self, a):
        if a == self.f2_zero:
            return True
        p = self.p
        norm = (a[0] * a[0] + a[1] * a[1]) % p
        return pow(norm, (p - 1) // 2, p) == 1

    def f2_sqrt(self, a):
        """Square root in Fp2 for p = 3 mod 4, or None."""
        p = self.p
        if a == self.f2_zero:
            return self.f2_zero
        a1 = self.f2_pow(a, (p - 3) // 4)
        alpha = self.f2_mul(self.f2_sqr(a1), a)
        a0 = self.f2_mul(self.f2_pow(alpha, p), alpha)
        minus_one = (p - 1, ZERO)
        if a0 == minus_one:
            return None
        x0 = self.f2_mul(a1, a)
        if alpha == minus_one:
            x = self.f2_mul((ZERO, ONE), x0)
        else:
            b = self.f2_pow(self.f2_add(self.f2_one, alpha), (p - 1) // 2)
            x = self.f2_mul(b, x0)
        return x if self.f2_sqr(x) == (a[0] % p, a[1] % p) else None

    # -- Fp6 ----------------------------------------------------------------
    def f6_add(self, a, b):
        p = self.p
        return tuple(((x[0] + y[0]) % p, (x[1] + y[1]) % p) for x, y in zip(a, b))

    def f6_sub(self, a, b):
        p = self.p
        return tuple(((x[0] - y[0]) % p, (x[1] - y[1]) % p) for x, y in zip(a, b))

    def f6_neg(self, a):
        p = self.p
        return tuple(((-x[0]) % p, (-x[1]) % p) for x in a)

    def f6_mul(self, a, b):
        mul, mxi = self.f2_mul, self.f2_mul_xi
        add, sub = self.f2_add, self.f2_sub
        a0, a1, a2 = a
        b0, b1, b2 = b
        t0 = mul(a0, b0)
        t1 = mul(a1, b1)
        t2 = mul(a2, b2)
        c0 = add(mxi(sub(sub(mul(add(a1, a2), add(b1, b2)), t1), t2)), t0)
        c1 = add(sub(sub(mul(add(a0, a1), add(b0, b1)), t0), t1), mxi(t2))
        c2 = add(sub(sub(mul(add(a0, a2), add(b0, b2)), t0), t2), t1)
        return (c0, c1, c2)

    def f6_mul_by_v(self, a):
        return (self.f2_mul_xi(a[2]), a[0], a[1])

    def f6_scale(self, a, k):
        """Multiply by an Fp scalar."""
        p = self.p
        return tuple((x[0] * k % p, x[1] * k % p) for x in a)

    def f6_mul_by_01(self, a, b0, b1):
        """a * (b0 + b1 v)."""
        mul, mxi, add = self.f2_mul, self.f2_mul_xi, self.f2_add
        a0, a1, a2 = a
        return (
            add(mul(a0, b0), mxi(mul(a2, b1))),
            add(mul(a0, b1), mul(a1, b0)),
            add(mul(a1, b1), mul(a2, b0)),
        )

    def f6_inv(self, a):
        mul, sqr, mxi, sub = self.f2_mul, self.f2_sqr, self.f2_mul_xi, self.f2_sub
        a0, a1, a2 = a
        t0 = sub(sqr(a0), mxi(mul(a1, a2)))
        t1 = sub(mxi(sqr(a2)), mul(a0, a1))
        t2 = sub(sqr(a1), mul(a0, a2))
        norm = self.f2_add(mul(a0, t0), mxi(self.f2_add(mul(a2, t1), mul(a1, t2))))
        inv = self.f2_inv(norm)
        return (mul(t0, inv), mul(t1, inv), mul(t2, inv))

    # -- Fp12 ---------------------------------------------------------------
    def f12_mul(self, a, b):
        m6 = self.f6_mul
        a0, a1 = a
        b0, b1 = b
        t0 = m6(a0, b0)
        t1 = m6(a1, b1)
        c1 = self.f6_sub(self.f6_sub(m6(self.f6_add(a0, a1), self.f6_add(b0, b1)), t0), t1)
        c0 = self.f6_add(t0, self.f6_mul_by_v(t1))
        return (c0, c1)

    def f12_sqr(self, a):
        a0, a1 = a
        t = self.f6_mul(a0, a1)
        c0 = self.f6_mul(self.f6_add(a0, a1), self.f6_add(a0, self.f6_mul_by_v(a1)))
        c0 = self.f6_sub(self.f6_sub(c0, t), self.f6_mul_by_v(t))
        return (c0, self.f6_add(t, t))

    def f12_inv(self, a):
        a0, a1 = a
        d = self.f6_sub(self.f6_mul(a0, a0), self.f6_mul_by_v(self.f6_mul(a1, a1)))
        inv = self.f6_inv(d)
        return (self.f6_mul(a0, inv), self.f6_neg(self.f6_mul(a1, inv)))

    def f12_conj(self, a):
        """a^(p^6); the inverse for elements of the cyclotomic subgroup."""
        return (a[0], self.f6_neg(a[1]))

    def f12_frobenius(self, a, power=1):
        conj, mul = self.f2_conj, self.f2_mul
        c = self.frob_coeffs
        for _ in range(power):
            (g00, g01, g02), (g10, g11, g12) = a
            # w-basis exponents: g0 -> 0,2,4 ; g1 -> 1,3,5
            a = (
                (conj(g00), mul(conj(g01), c[2]), mul(conj(g02), c[4])),
                (mul(conj(g10), c[1]), mul(conj(g11), c[3]), mul(conj(g12), c[5])),
            )
        return a

    def f12_pow(self, a, e):
        if e < 0:
            a, e = self.f12_inv(a), -e
        result = self.f12_one
        for bit in bin(e)[2:]:
            result = self.f12_sqr(result)
            if bit == "1":
                result = self.f12_mul(result, a)
        return result

    def f12_mul_by_line(self, f, y_p, l1, l3):
        """f * (y_p + l1 w + l3 w^3) with y_p in Fp and l1, l3 in Fp2."""
        f0, f1 = f
        # line = g0 + g1 w with g0 = (y_p, 0, 0), g1 = (l1, l3, 0)
        t0 = self.f6_scale(f0, y_p)
        t1 = self.f6_mul_by_01(f1, l1, l3)
        s = self.f6_mul_by_01(self.f6_add(f0, f1), self.f2_add((y_p, ZERO), l1), l3)
        c1 = self.f6_sub(self.f6_sub(s, t0), t1)
        c0 = self.f6_add(t0, self.f6_mul_by_v(t1))
        return (c0, c1)
