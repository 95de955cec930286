"""R1CS to QAP compilation and the quotient polynomial h(x).

Row ``j`` of the constraint matrices becomes evaluation point ``domain[j]``.
When ``bind_public`` is set, one extra row per public wire ``i`` carries
``u_i = 1`` (and nothing else).  Those rows are always satisfied, but they
make the public-wire polynomials linearly independent of everything else,
which the proof system needs for its public inputs to be binding.  Without
them a circuit whose public wire never appears in an a-term would let a
prover shift that input freely.
"""

from __future__ import annotations

from gmpy2 import mpz

from .algebra import EvaluationDomain, Polynomial, poly_divide, poly_mul_raw
from .errors import DomainError, NotSatisfiedError, StateError
from .r1cs import Assignment, ConstraintSystem


class Qap:
    """QAP view of a sealed constraint system.

    Per-wire polynomials are interpolated on first access; setup and proving
    only ever need their values at one point (:meth:`evaluate_at`) or the
    row evaluations of a full assignment, so large circuits never pay for
    thousands of interpolations.
    """

    def __init__(self, cs: ConstraintSystem, domain: EvaluationDomain, bind_public: bool = True):
        self.cs = cs
        self.domain = domain
        self.field = cs.field
        self.bind_public = bind_public
        self.num_wires = cs.num_wires
        self.num_public = cs.num_public
        rows_a = [c.a for c in cs.constraints]
        rows_b = [c.b for c in cs.constraints]
        rows_c = [c.c for c in cs.constraints]
        if bind_public:
            for i in range(cs.num_public):
                rows_a.append({i: mpz(1)})
                rows_b.append({})
                rows_c.append({})
        self.num_rows = len(rows_a)
        self.rows = (rows_a, rows_b, rows_c)
        self.target = domain.vanishing_polynomial()
        self._cache = ({}, {}, {})

    @property
    def n(self) -> int:
        """Degree of t(x), the domain size."""
        return self.domain.size

    # -- per-wire polynomials ---------------------------------------------------
    def _column(self, which: int, wire: int) -> list:
        col = [mpz(0)] * self.n
        for j, row in enumerate(self.rows[which]):
            coef = row.get(wire)
            if coef:
                col[j] = coef
        return col

    def _poly(self, which: int, wire: int) -> Polynomial:
        if not 0 <= wire < self.num_wires:
            raise IndexError("wire %d out of range" % wire)
        cache = self._cache[which]
        if wire not in cache:
            cache[wire] = self.domain.interpolate(self._column(which, wire))
        return cache[wire]

    def u(self, wire: int) -> Polynomial:
        return self._poly(0, wire)

    def v(self, wire: int) -> Polynomial:
        return self._poly(1, wire)

    def w(self, wire: int) -> Polynomial:
        return self._poly(2, wire)

    @property
    def u_polys(self) -> list:
        return [self.u(i) for i in range(self.num_wires)]

    @property
    def v_polys(self) -> list:
        return [self.v(i) for i in range(self.num_wires)]

    @property
    def w_polys(self) -> list:
        return [self.w(i) for i in range(self.num_wires)]

    # -- evaluation at a single point ---------------------------------------------
    def evaluate_at(self, x) -> tuple:
        """``([u_i(x)], [v_i(x)], [w_i(x)])`` for every wire, via the Lagrange basis."""
        p = self.field.modulus
        lag = self.domain.lagrange_at(x)
        out = []
        for rows in self.rows:
            acc = [mpz(0)] * self.num_wires
            for j, row in enumerate(rows):
                lj = lag[j]
                for i, coef in row.items():
                    acc[i] += coef * lj
            out.append([a % p for a in acc])
        return tuple(out)

    # -- witness side ----------------------------------------------------------------
    def row_values(self, t) -> tuple:
        """``<A_j, t>``, ``<B_j, t>``, ``<C_j, t>`` for every domain row (zero-padded)."""
        values = t.values if isinstance(t, Assignment) else list(t)
        if len(values) != self.num_wires:
            raise StateError("assignment has %d wires, QAP expects %d" % (len(values), self.num_wires))
        p = self.field.modulus
        out = []
        for rows in self.rows:
            col = [sum(coef * values[i] for i, coef in row.items()) % p for row in rows]
            col.extend([mpz(0)] * (self.n - len(col)))
            out.append(col)
        return tuple(out)

    def combined(self, t) -> tuple:
        """The polynomials ``sum a_i u_i``, ``sum a_i v_i``, ``sum a_i w_i``."""
        a, b, c = self.row_values(t)
        d = self.domain
        return d.interpolate(a), d.interpolate(b), d.interpolate(c)

    def p_poly(self, t) -> Polynomial:
        """p(x) = (sum a_i u_i)(sum a_i v_i) - (sum a_i w_i), by schoolbook products."""
        A, B, C = self.combined(t)
        prod = Polynomial._raw(poly_mul_raw(A.coeffs, B.coeffs, self.field.modulus), self.field)
        return prod - C

    def divide(self, t) -> tuple:
        """Long division of p(x) by t(x): ``(h, remainder)``."""
        return poly_divide(self.p_poly(t), self.target)

    def witness_poly(self, t, use_fft: bool = True) -> Polynomial:
        """h(x) with p(x) = h(x) t(x); raises NotSatisfiedError when t does not divide p."""
        g = self.field.multiplicative_generator
        p = self.field.modulus
        if use_fft and self.domain.is_fft and pow(g, self.n, p) == 1:
            use_fft = False  # shift lies in the domain; tiny fields only
        if not (use_fft and self.domain.is_fft):
            h, rem = self.divide(t)
            if not rem.is_zero():
                raise NotSatisfiedError("p(x) is not divisible by t(x)")
            return h
        a, b, c = self.row_values(t)
        for j in range(self.num_rows):
            if (a[j] * b[j] - c[j]) % p:
                raise NotSatisfiedError("p(x) is not divisible by t(x)", constraint=j)
        d = self.domain
        # move to the coset g*H where t(x) = g^n - 1 is a nonzero constant
        ea = d.coset_fft(d.ifft(a), g)
        eb = d.coset_fft(d.ifft(b), g)
        ec = d.coset_fft(d.ifft(c), g)
        z_inv = self.field.inv(pow(g, self.n, p) - 1)
        quot = [(x * y - z) * z_inv % p for x, y, z in zip(ea, eb, ec)]
        return Polynomial(d.coset_ifft(quot, g), self.field)


def compile(cs: ConstraintSystem, domain: EvaluationDomain | None = None, bind_public: bool = True) -> Qap:
    """Compile a sealed constraint system; pick the smallest FFT domain if none is given."""
    if not cs.sealed:
        raise StateError("seal the constraint system before compiling it")
    rows = cs.num_constraints + (cs.num_public if bind_public else 0)
    if domain is None:
        domain = EvaluationDomain.for_size(cs.field, rows)
    elif domain.size < rows:
        raise DomainError("domain of size %d cannot hold %d rows" % (domain.size, rows))
    if domain.field != cs.field:
        raise DomainError("domain and constraint system use different fields")
    return Qap(cs, domain, bind_public)


def witness_poly(qap: Qap, t) -> Polynomial:
    return qap.witness_poly(t)
