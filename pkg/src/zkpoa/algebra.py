"""Prime fields, univariate polynomials and evaluation domains.

Hot loops (FFT, interpolation, division) work on plain integers modulo the
field prime; :class:`FieldElement` is the checked, user-facing value type.
Arithmetic is not constant time.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from gmpy2 import invert as _invert
from gmpy2 import mpz

from .errors import DivisionByZero, DomainError, FieldMismatch, ParseError


def batch_inverse(values: Sequence[int], modulus: int) -> list:
    """Invert every element with one modular inversion (Montgomery's trick)."""
    n = len(values)
    if n == 0:
        return []
    prefix = [mpz(0)] * n
    acc = mpz(1)
    for i, v in enumerate(values):
        if v % modulus == 0:
            raise DivisionByZero("batch_inverse: zero element at index %d" % i)
        prefix[i] = acc
        acc = acc * v % modulus
    inv = _invert(acc, modulus)
    out = [mpz(0)] * n
    for i in range(n - 1, -1, -1):
        out[i] = inv * prefix[i] % modulus
        inv = inv * values[i] % modulus
    return out


class PrimeField:
    """The integers modulo a prime, tagged with a name used as modulus-id."""

    def __init__(self, modulus: int, name: str = ""):
        self.modulus = mpz(modulus)
        self.name = name or "F_%d" % modulus
        self.nbytes = (int(modulus).bit_length() + 7) // 8
        m = int(modulus) - 1
        s = 0
        while m % 2 == 0:
            m //= 2
            s += 1
        self.two_adicity = s
        self._odd = m
        self._two_adic_root = None

    def __repr__(self):
        return "PrimeField(%s)" % self.name

    def __eq__(self, other):
        return isinstance(other, PrimeField) and self.modulus == other.modulus and self.name == other.name

    def __hash__(self):
        return hash((int(self.modulus), self.name))

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, FieldElement):
            self._check(value)
            return value
        return FieldElement(value, self)

    def _check(self, element):
        if element.field is not self and element.field != self:
            raise FieldMismatch("cannot combine %s with %s" % (element.field.name, self.name))

    # raw-integer helpers used by the hot paths
    def inv(self, a) -> mpz:
        a = mpz(a) % self.modulus
        if a == 0:
            raise DivisionByZero("inverse of zero in %s" % self.name)
        return _invert(a, self.modulus)

    def is_square(self, a) -> bool:
        a = mpz(a) % self.modulus
        return a == 0 or pow(a, (self.modulus - 1) // 2, self.modulus) == 1

    def sqrt(self, a):
        """Tonelli-Shanks square root; returns None for non-residues."""
        p = self.modulus
        a = mpz(a) % p
        if a == 0:
            return mpz(0)
        if not self.is_square(a):
            return None
        if p % 4 == 3:
            return pow(a, (p + 1) // 4, p)
        s, q = self.two_adicity, self._odd
        z = mpz(2)
        while self.is_square(z):
            z += 1
        m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
        while t != 1:
            i, t2 = 0, t
            while t2 != 1:
                t2 = t2 * t2 % p
                i += 1
            b = pow(c, 1 << (m - i - 1), p)
            m, c = i, b * b % p
            t, r = t * c % p, r * b % p
        return r

    @property
    def multiplicative_generator(self) -> mpz:
        """Smallest quadratic non-residue; used as a coset shift for FFT domains.

        Its order has the full two-adic part, so ``g^n != 1`` for every
        power-of-two domain size ``n``.
        """
        z = mpz(2)
        while self.is_square(z):
            z += 1
        return z

    def root_of_unity(self, n: int) -> mpz:
        """Primitive n-th root of unity for n a power of two."""
        if n < 1 or n & (n - 1) or n.bit_length() - 1 > self.two_adicity:
            raise DomainError("no %d-th root of unity in %s" % (n, self.name))
        if self._two_adic_root is None:
            self._two_adic_root = pow(self.multiplicative_generator, self._odd, self.modulus)
        k = self.two_adicity - (n.bit_length() - 1)
        return pow(self._two_adic_root, 1 << k, self.modulus)

    def random(self, rng, nonzero=False) -> "FieldElement":
        lo = 1 if nonzero else 0
        return FieldElement(rng.randrange(lo, int(self.modulus)), self)

    def encode(self, value) -> bytes:
        return int(value).to_bytes(self.nbytes, "big")

    def decode(self, data: bytes, offset: int = 0) -> mpz:
        if len(data) != self.nbytes:
            raise ParseError("field element needs %d bytes, got %d" % (self.nbytes, len(data)), offset)
        v = int.from_bytes(data, "big")
        if v >= self.modulus:
            raise ParseError("non-canonical field element", offset)
        return mpz(v)


class FieldElement:
    """Immutable residue of a :class:`PrimeField`."""

    __slots__ = ("value", "field")

    def __init__(self, value, field: PrimeField):
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "value", mpz(value) % field.modulus)

    def __setattr__(self, name, value):
        raise AttributeError("FieldElement is immutable")

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            self.field._check(other)
            return other.value
        if isinstance(other, int) or type(other).__name__ == "mpz":
            return mpz(other)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value + o, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value - o, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o - self.value, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * o, self.field)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * self.field.inv(o), self.field)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o * self.inverse().value, self.field)

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def __pow__(self, e: int):
        if e < 0:
            return FieldElement(pow(self.inverse().value, -e, self.field.modulus), self.field)
        return FieldElement(pow(self.value, e, self.field.modulus), self.field)

    def inverse(self) -> "FieldElement":
        return FieldElement(self.field.inv(self.value), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.field.modulus
        return NotImplemented

    def __hash__(self):
        return hash((int(self.value), self.field.name))

    def __int__(self):
        return int(self.value)

    def __index__(self):
        return int(self.value)

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return "%s(%d)" % (self.field.name, self.value)

    def to_bytes(self) -> bytes:
        return self.field.encode(self.value)

    @classmethod
    def from_bytes(cls, data: bytes, field: PrimeField) -> "FieldElement":
        return cls(field.decode(data), field)


# -- polynomials -----------------------------------------------------------

def _trim(coeffs: list) -> list:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return coeffs


class Polynomial:
    """Dense polynomial, coefficients lowest degree first, canonical form."""

    __slots__ = ("field", "coeffs")

    def __init__(self, coeffs: Iterable, field: PrimeField):
        p = field.modulus
        vals = []
        for c in coeffs:
            if isinstance(c, FieldElement):
                field._check(c)
                c = c.value
            vals.append(mpz(c) % p)
        self.field = field
        self.coeffs = tuple(_trim(vals))

    @classmethod
    def _raw(cls, coeffs: list, field: PrimeField) -> "Polynomial":
        # caller guarantees reduced mpz coefficients
        poly = cls.__new__(cls)
        poly.field = field
        poly.coeffs = tuple(_trim(coeffs))
        return poly

    @classmethod
    def zero(cls, field):
        return cls._raw([], field)

    @classmethod
    def monomial(cls, degree, field, coeff=1):
        return cls([0] * degree + [coeff], field)

    @property
    def coefficients(self) -> list:
        return [FieldElement(c, self.field) for c in self.coeffs]

    @property
    def degree(self) -> int:
        """Degree, with -1 standing for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.field == other.field and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return "Polynomial(%s)" % list(map(int, self.coeffs))

    def __call__(self, x):
        if isinstance(x, FieldElement):
            return FieldElement(self.evaluate(x.value), self.field)
        return FieldElement(self.evaluate(x), self.field)

    def evaluate(self, x) -> mpz:
        p = self.field.modulus
        x = mpz(x)
        acc = mpz(0)
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % p
        return acc

    def _other(self, other):
        if isinstance(other, Polynomial):
            if other.field != self.field:
                raise FieldMismatch("polynomials over different fields")
            return other
        return Polynomial([other], self.field)

    def __add__(self, other):
        other = self._other(other)
        p = self.field.modulus
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = (out[i] + c) % p
        return Polynomial._raw(out, self.field)

    __radd__ = __add__

    def __neg__(self):
        p = self.field.modulus
        return Polynomial._raw([(-c) % p for c in self.coeffs], self.field)

    def __sub__(self, other):
        return self + (-self._other(other))

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            k = other.value if isinstance(other, FieldElement) else mpz(other)
            p = self.field.modulus
            return Polynomial._raw([c * k % p for c in self.coeffs], self.field)
        other = self._other(other)
        return Polynomial._raw(poly_mul_raw(self.coeffs, other.coeffs, self.field.modulus), self.field)

    __rmul__ = __mul__

    def __divmod__(self, other):
        return poly_divide(self, other)

    def __floordiv__(self, other):
        return poly_divide(self, other)[0]

    def __mod__(self, other):
        return poly_divide(self, other)[1]


def poly_mul_raw(a: Sequence, b: Sequence, p) -> list:
    if not a or not b:
        return []
    out = [mpz(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return [c % p for c in out]


def poly_divide(numerator: Polynomial, denominator: Polynomial):
    """Euclidean division; returns ``(quotient, remainder)``."""
    if numerator.field != denominator.field:
        raise FieldMismatch("polynomials over different fields")
    if denominator.is_zero():
        raise DivisionByZero("polynomial division by zero")
    field = numerator.field
    p = field.modulus
    num = list(numerator.coeffs)
    den = denominator.coeffs
    dd = len(den) - 1
    if len(num) - 1 < dd:
        return Polynomial.zero(field), numerator
    lead_inv = field.inv(den[-1])
    quot = [mpz(0)] * (len(num) - dd)
    for k in range(len(num) - dd - 1, -1, -1):
        q = num[k + dd] * lead_inv % p
        quot[k] = q
        if q:
            for j in range(dd + 1):
                num[k + j] = (num[k + j] - q * den[j]) % p
    return Polynomial._raw(quot, field), Polynomial._raw(num[:dd], field)


def poly_interpolate(values: Sequence, field: PrimeField | None = None) -> Polynomial:
    """Lagrange interpolation through ``(x, y)`` pairs (O(n^2) baseline).

    Pairs may be FieldElements or integers; with plain integers ``field`` is
    required.
    """
    pts = list(values)
    if field is None:
        if not pts:
            raise DomainError("cannot infer field from an empty point list")
        field = pts[0][0].field
    p = field.modulus
    xs = [mpz(x.value if isinstance(x, FieldElement) else x) % p for x, _ in pts]
    ys = [mpz(y.value if isinstance(y, FieldElement) else y) % p for _, y in pts]
    if len(set(xs)) != len(xs):
        raise DomainError("interpolation points are not pairwise distinct")
    return Polynomial._raw(_lagrange_coeffs(xs, ys, p), field)


def _vanishing_coeffs(xs, p) -> list:
    t = [mpz(1)]
    for x in xs:
        nt = [mpz(0)] * (len(t) + 1)
        for i, c in enumerate(t):
            nt[i + 1] = (nt[i + 1] + c) % p
            nt[i] = (nt[i] - x * c) % p
        t = nt
    return t


def _barycentric_weights(xs, p) -> list:
    dens = []
    for j, xj in enumerate(xs):
        d = mpz(1)
        for k, xk in enumerate(xs):
            if k != j:
                d = d * (xj - xk) % p
        dens.append(d)
    return batch_inverse(dens, p)


def _lagrange_coeffs(xs, ys, p, t=None, weights=None) -> list:
    n = len(xs)
    if n == 0:
        return []
    if t is None:
        t = _vanishing_coeffs(xs, p)
    if weights is None:
        weights = _barycentric_weights(xs, p)
    out = [mpz(0)] * n
    for xj, yj, wj in zip(xs, ys, weights):
        scale = yj * wj % p
        if scale == 0:
            continue
        # synthetic division of t(x) by (x - xj), accumulated on the fly
        carry = mpz(0)
        for i in range(n, 0, -1):
            carry = (t[i] + carry * xj) % p
            out[i - 1] += scale * carry
    return [c % p for c in out]


# -- FFT over two-adic subgroups ----------------------------------------------

def _fft_raw(values: list, root, p) -> list:
    n = len(values)
    a = list(values)
    j = 0
    for i in range(1, n):
        bit = n >> 1
        while j & bit:
            j ^= bit
            bit >>= 1
        j |= bit
        if i < j:
            a[i], a[j] = a[j], a[i]
    length = 2
    while length <= n:
        w_len = pow(root, n // length, p)
        half = length // 2
        ws = [mpz(1)] * half
        for k in range(1, half):
            ws[k] = ws[k - 1] * w_len % p
        for start in range(0, n, length):
            for k in range(half):
                u = a[start + k]
                v = a[start + k + half] * ws[k] % p
                a[start + k] = (u + v) % p
                a[start + k + half] = (u - v) % p
        length <<= 1
    return a


class EvaluationDomain:
    """Distinct evaluation points for QAP interpolation.

    ``kind`` is ``"roots-of-unity"`` (points are successive powers of a
    primitive root, FFT-capable) or ``"arbitrary"`` (points ``1..n``,
    interpolation by the quadratic Lagrange baseline).
    """

    ROOTS = "roots-of-unity"
    ARBITRARY = "arbitrary"

    def __init__(self, field: PrimeField, points: Sequence, kind: str = ARBITRARY, generator=None):
        p = field.modulus
        pts = tuple(mpz(x.value if isinstance(x, FieldElement) else x) % p for x in points)
        if len(set(pts)) != len(pts):
            raise DomainError("domain points are not pairwise distinct")
        if not pts:
            raise DomainError("empty evaluation domain")
        self.field = field
        self.points = pts
        self.kind = kind
        self.generator = generator
        self._weights = None
        self._vanishing = None

    @classmethod
    def roots_of_unity(cls, field: PrimeField, size: int) -> "EvaluationDomain":
        omega = field.root_of_unity(size)
        pts = [mpz(1)]
        for _ in range(size - 1):
            pts.append(pts[-1] * omega % field.modulus)
        return cls(field, pts, cls.ROOTS, generator=omega)

    @classmethod
    def arbitrary(cls, field: PrimeField, size: int) -> "EvaluationDomain":
        if size >= field.modulus:
            raise DomainError("field too small for %d distinct points" % size)
        return cls(field, range(1, size + 1), cls.ARBITRARY)

    @classmethod
    def for_size(cls, field: PrimeField, count: int, use_fft: bool = True) -> "EvaluationDomain":
        """Smallest FFT domain holding ``count`` rows, or exactly ``count`` points."""
        count = max(count, 1)
        if use_fft:
            size = 1 << (count - 1).bit_length()
            if size.bit_length() - 1 <= field.two_adicity:
                return cls.roots_of_unity(field, size)
        return cls.arbitrary(field, count)

    @property
    def size(self) -> int:
        return len(self.points)

    def __len__(self):
        return len(self.points)

    @property
    def is_fft(self) -> bool:
        return self.kind == self.ROOTS

    def vanishing_polynomial(self) -> Polynomial:
        """t(x) = prod (x - point_j)."""
        if self._vanishing is None:
            p = self.field.modulus
            if self.is_fft:
                coeffs = [p - 1] + [0] * (self.size - 1) + [1]
                self._vanishing = Polynomial(coeffs, self.field)
            else:
                self._vanishing = Polynomial._raw(_vanishing_coeffs(self.points, p), self.field)
        return self._vanishing

    def vanishing_at(self, x) -> mpz:
        p = self.field.modulus
        x = mpz(x) % p
        if self.is_fft:
            return (pow(x, self.size, p) - 1) % p
        acc = mpz(1)
        for d in self.points:
            acc = acc * (x - d) % p
        return acc

    def _bary(self):
        if self._weights is None:
            p = self.field.modulus
            if self.is_fft:
                # weight_j = omega^j / n
                n_inv = self.field.inv(self.size)
                self._weights = [d * n_inv % p for d in self.points]
            else:
                self._weights = _barycentric_weights(self.points, p)
        return self._weights

    def lagrange_at(self, x) -> list:
        """Values L_j(x) of every Lagrange basis polynomial at ``x``."""
        p = self.field.modulus
        x = mpz(x) % p
        if x in self.points:
            return [mpz(1) if d == x else mpz(0) for d in self.points]
        z = self.vanishing_at(x)
        invs = batch_inverse([(x - d) % p for d in self.points], p)
        return [z * w % p * i % p for w, i in zip(self._bary(), invs)]

    def interpolate(self, values: Sequence, use_fft: bool = True) -> Polynomial:
        """Polynomial of degree < size taking ``values[j]`` at ``points[j]``."""
        if len(values) != self.size:
            raise DomainError("expected %d values, got %d" % (self.size, len(values)))
        p = self.field.modulus
        ys = [mpz(v.value if isinstance(v, FieldElement) else v) % p for v in values]
        if self.is_fft and use_fft:
            return Polynomial._raw(self.ifft(ys), self.field)
        return Polynomial._raw(
            _lagrange_coeffs(self.points, ys, p, t=list(self.vanishing_polynomial().coeffs), weights=self._bary()),
            self.field,
        )

    def evaluate(self, poly: Polynomial, use_fft: bool = True) -> list:
        if self.is_fft and use_fft and poly.degree < self.size:
            coeffs = list(poly.coeffs) + [mpz(0)] * (self.size - len(poly.coeffs))
            return self.fft(coeffs)
        return [poly.evaluate(d) for d in self.points]

    # raw FFT helpers (roots-of-unity domains only)
    def fft(self, coeffs: list) -> list:
        return _fft_raw(coeffs, self.generator, self.field.modulus)

    def ifft(self, values: list) -> list:
        p = self.field.modulus
        out = _fft_raw(values, self.field.inv(self.generator), p)
        n_inv = self.field.inv(self.size)
        return [c * n_inv % p for c in out]

    def coset_fft(self, coeffs: list, shift) -> list:
        p = self.field.modulus
        scaled, g = [], mpz(1)
        for c in coeffs:
            scaled.append(c * g % p)
            g = g * shift % p
        return self.fft(scaled)

    def coset_ifft(self, values: list, shift) -> list:
        p = self.field.modulus
        coeffs = self.ifft(values)
        inv = self.field.inv(shift)
        out, g = [], mpz(1)
        for c in coeffs:
            out.append(c * g % p)
            g = g * inv % p
        return out
