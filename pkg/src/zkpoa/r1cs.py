"""Rank-1 constraint systems: wire allocation, constraint emission, witness solving.

Wire 0 is the constant one.  Public wires are allocated first and occupy
indices ``1..l``; auxiliary wires follow.  Gadgets attach a compute
function to each auxiliary wire they allocate, so a full assignment can be
solved from a handful of named inputs once the circuit is built.
"""

from __future__ import annotations

import hashlib
import struct
from contextlib import contextmanager
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

from gmpy2 import mpz

from .algebra import FieldElement, PrimeField
from .errors import ParseError, ShapeError, StateError, WireError

PUBLIC = "public"
AUXILIARY = "auxiliary"

_MAGIC = b"ZKR1"
_VERSION = 1


def _coerce_scalar(value, modulus):
    if isinstance(value, FieldElement):
        return value.value
    return mpz(value) % modulus


class LinearCombination:
    """Sparse sum ``sum coef_i * wire_i``; wire 0 carries constants."""

    __slots__ = ("terms", "modulus")

    def __init__(self, terms: Mapping[int, int] | None = None, modulus=None):
        self.modulus = modulus
        self.terms = {}
        if terms:
            for idx, coef in terms.items():
                coef = mpz(coef) % modulus
                if coef:
                    self.terms[idx] = coef

    @classmethod
    def constant(cls, value, modulus) -> "LinearCombination":
        return cls({0: _coerce_scalar(value, modulus)}, modulus)

    def _lc(self, other) -> "LinearCombination":
        if isinstance(other, LinearCombination):
            return other
        if isinstance(other, Variable):
            return other.lc
        return LinearCombination.constant(other, self.modulus)

    def __add__(self, other):
        other = self._lc(other)
        out = dict(self.terms)
        m = self.modulus
        for idx, coef in other.terms.items():
            out[idx] = (out.get(idx, 0) + coef) % m
        return LinearCombination(out, m)

    __radd__ = __add__

    def __neg__(self):
        m = self.modulus
        return LinearCombination({i: (-c) % m for i, c in self.terms.items()}, m)

    def __sub__(self, other):
        return self + (-self._lc(other))

    def __rsub__(self, other):
        return self._lc(other) - self

    def __mul__(self, k):
        if isinstance(k, (LinearCombination, Variable)):
            raise TypeError("product of two linear combinations is not linear; use enforce()")
        k = _coerce_scalar(k, self.modulus)
        return LinearCombination({i: c * k for i, c in self.terms.items()}, self.modulus)

    __rmul__ = __mul__

    def evaluate(self, values: Sequence) -> mpz:
        acc = mpz(0)
        for idx, coef in self.terms.items():
            acc += coef * values[idx]
        return acc % self.modulus

    @property
    def lc(self):
        return self

    def __repr__(self):
        return "LC(%s)" % ", ".join("%d*w%d" % (c, i) for i, c in sorted(self.terms.items()))


class Variable:
    """Handle on one allocated wire."""

    __slots__ = ("index", "modulus", "name")

    def __init__(self, index: int, modulus, name: str | None = None):
        self.index = index
        self.modulus = modulus
        self.name = name

    @property
    def lc(self) -> LinearCombination:
        return LinearCombination({self.index: 1}, self.modulus)

    def __add__(self, other):
        return self.lc + other

    __radd__ = __add__

    def __sub__(self, other):
        return self.lc - other

    def __rsub__(self, other):
        return other - self.lc if isinstance(other, (LinearCombination, Variable)) else self.lc.__rsub__(other)

    def __neg__(self):
        return -self.lc

    def __mul__(self, k):
        return self.lc * k

    __rmul__ = __mul__

    def __repr__(self):
        return "Variable(%d%s)" % (self.index, ", %s" % self.name if self.name else "")


@dataclass(frozen=True)
class Constraint:
    """``<a, t> * <b, t> = <c, t>`` with sparse coefficient maps."""

    a: dict
    b: dict
    c: dict


class Assignment:
    """Full wire vector ``t``; ``values[0]`` is always one."""

    __slots__ = ("values", "num_public", "layout_hash")

    def __init__(self, values: Sequence, num_public: int, layout_hash: bytes | None = None):
        if not values or values[0] != 1:
            raise ShapeError("assignment must start with the constant-one wire")
        self.values = list(values)
        self.num_public = num_public
        self.layout_hash = layout_hash

    def __len__(self):
        return len(self.values)

    def __getitem__(self, idx):
        return self.values[idx]

    @property
    def public(self) -> list:
        """Prefix ``(1, a_1, ..., a_l)``."""
        return self.values[: self.num_public]

    @property
    def witness(self) -> list:
        return self.values[self.num_public:]

    def with_value(self, index: int, value) -> "Assignment":
        vals = list(self.values)
        vals[index] = value
        return Assignment(vals, self.num_public, self.layout_hash)


class PublicInputs(list):
    """Public prefix of an assignment, remembering which circuit produced it."""

    def __init__(self, values, layout_hash: bytes | None = None):
        super().__init__(values)
        self.layout_hash = layout_hash


class _Context:
    """Read-only view used by compute functions during witness solving."""

    def __init__(self, values, inputs, modulus):
        self.values = values
        self.inputs = inputs
        self.modulus = modulus

    def __getitem__(self, item):
        if isinstance(item, Variable):
            v = self.values[item.index]
            if v is None:
                raise StateError("wire %r read before it was solved" % item)
            return v
        if isinstance(item, LinearCombination):
            for idx in item.terms:
                if self.values[idx] is None:
                    raise StateError("wire %d read before it was solved" % idx)
            return item.evaluate(self.values)
        return mpz(item) % self.modulus


class ConstraintSystem:
    def __init__(self, field: PrimeField):
        self.field = field
        self.modulus = field.modulus
        self.constraints: list[Constraint] = []
        self.num_public = 1  # the constant wire
        self.num_aux = 0
        self.names: dict[int, str] = {0: "one"}
        self._by_name: dict[str, Variable] = {}
        self._steps: list[tuple[int, Callable]] = []
        self._sealed = False
        self._regions: list[str] = []
        self.region_counts: dict[str, int] = {}
        self._layout_hash = None

    # -- building -------------------------------------------------------------
    @property
    def one(self) -> Variable:
        return Variable(0, self.modulus, "one")

    @property
    def num_wires(self) -> int:
        return self.num_public + self.num_aux

    @property
    def num_constraints(self) -> int:
        return len(self.constraints)

    @property
    def sealed(self) -> bool:
        return self._sealed

    def _check_open(self):
        if self._sealed:
            raise StateError("constraint system is sealed")

    def allocate(self, kind: str = AUXILIARY, name: str | None = None, compute: Callable | None = None) -> Variable:
        self._check_open()
        if kind == PUBLIC:
            if self.num_aux:
                raise StateError("public wires must be allocated before auxiliary wires")
            index = self.num_public
            self.num_public += 1
        elif kind == AUXILIARY:
            index = self.num_public + self.num_aux
            self.num_aux += 1
        else:
            raise ValueError("unknown wire kind %r" % kind)
        var = Variable(index, self.modulus, name)
        if name is not None:
            if name in self._by_name:
                raise ValueError("duplicate wire name %r" % name)
            self._by_name[name] = var
            self.names[index] = name
        if compute is not None:
            self._steps.append((index, compute))
        return var

    def set_compute(self, var: Variable, compute: Callable):
        self._check_open()
        self._steps.append((var.index, compute))

    def variable(self, name: str) -> Variable:
        return self._by_name[name]

    def lc(self, value) -> LinearCombination:
        if isinstance(value, LinearCombination):
            return value
        if isinstance(value, Variable):
            return value.lc
        return LinearCombination.constant(value, self.modulus)

    def enforce(self, a, b, c, label: str | None = None):
        """Append ``a * b = c``."""
        self._check_open()
        terms = []
        for part in (a, b, c):
            lc = self.lc(part)
            for idx in lc.terms:
                if not 0 <= idx < self.num_wires:
                    raise WireError("constraint references unallocated wire %d" % idx)
            terms.append(dict(lc.terms))
        self.constraints.append(Constraint(*terms))
        for i in range(len(self._regions)):
            key = "/".join(self._regions[: i + 1])
            self.region_counts[key] = self.region_counts.get(key, 0) + 1

    @contextmanager
    def region(self, name: str):
        """Attribute constraints emitted inside the block to ``name``."""
        self._regions.append(name)
        try:
            yield
        finally:
            self._regions.pop()

    def seal(self) -> "ConstraintSystem":
        self._sealed = True
        self._layout_hash = None
        return self

    # -- checking ---------------------------------------------------------------
    def _values(self, t) -> list:
        values = t.values if isinstance(t, Assignment) else list(t)
        if len(values) != self.num_wires:
            raise ShapeError("assignment has %d wires, circuit has %d" % (len(values), self.num_wires))
        return [_coerce_scalar(v, self.modulus) for v in values]

    def first_unsatisfied(self, t) -> int | None:
        values = self._values(t)
        m = self.modulus
        for j, con in enumerate(self.constraints):
            av = sum(coef * values[i] for i, coef in con.a.items())
            bv = sum(coef * values[i] for i, coef in con.b.items())
            cv = sum(coef * values[i] for i, coef in con.c.items())
            if (av * bv - cv) % m:
                return j
        return None

    def is_satisfied(self, t) -> bool:
        values = self._values(t)
        if values[0] != 1:
            return False
        return self.first_unsatisfied(values) is None

    # -- witness solving --------------------------------------------------------
    def generate_assignment(self, inputs: Mapping[str, int], overrides: Mapping[str, int] | None = None) -> Assignment:
        """Solve every wire from named inputs plus the gadgets' compute steps.

        ``overrides`` replaces the computed value of named wires; tests use it
        to play a cheating prover.
        """
        m = self.modulus
        overrides = dict(overrides or {})
        values = [None] * self.num_wires
        values[0] = mpz(1)
        for idx, name in self.names.items():
            if idx and name in inputs:
                values[idx] = mpz(int(inputs[name])) % m
        ctx = _Context(values, inputs, m)
        for idx, fn in self._steps:
            name = self.names.get(idx)
            if name in overrides:
                values[idx] = mpz(int(overrides[name])) % m
            elif values[idx] is None or name not in inputs:
                values[idx] = mpz(int(fn(ctx))) % m
        for name, v in overrides.items():
            values[self._by_name[name].index] = mpz(int(v)) % m
        missing = [self.names.get(i, "w%d" % i) for i, v in enumerate(values) if v is None]
        if missing:
            raise StateError("unsolved wires: %s" % ", ".join(missing[:5]))
        return Assignment(values, self.num_public, self.layout_hash)

    def public_inputs(self, t) -> PublicInputs:
        values = t.values if isinstance(t, Assignment) else list(t)
        return PublicInputs(values[: self.num_public], self.layout_hash)

    # -- serialization ----------------------------------------------------------
    def _body(self) -> bytes:
        w = self.field.nbytes
        parts = []
        names = [self.names.get(i, "").encode() for i in range(self.num_public)]
        for nm in names:
            parts.append(struct.pack(">H", len(nm)) + nm)
        for con in self.constraints:
            for terms in (con.a, con.b, con.c):
                parts.append(struct.pack(">I", len(terms)))
                for idx in sorted(terms):
                    parts.append(struct.pack(">I", idx) + int(terms[idx]).to_bytes(w, "big"))
        return b"".join(parts)

    def _header_prefix(self) -> bytes:
        mod = int(self.modulus).to_bytes(self.field.nbytes, "big")
        return (
            _MAGIC
            + struct.pack(">HH", _VERSION, len(mod))
            + mod
            + struct.pack(">III", self.num_public, self.num_aux, self.num_constraints)
        )

    @property
    def layout_hash(self) -> bytes:
        """SHA-256 over counts, public wire names and every constraint."""
        if self._layout_hash is not None and self._sealed:
            return self._layout_hash
        h = hashlib.sha256(self._header_prefix() + self._body()).digest()
        if self._sealed:
            self._layout_hash = h
        return h

    def to_bytes(self) -> bytes:
        body = self._body()
        digest = hashlib.sha256(self._header_prefix() + body).digest()
        return self._header_prefix() + digest + body

    @classmethod
    def from_bytes(cls, data: bytes, field: PrimeField | None = None) -> "ConstraintSystem":
        view = memoryview(data)
        pos = 0

        def take(n):
            nonlocal pos
            if pos + n > len(view):
                raise ParseError("truncated constraint system", pos)
            chunk = bytes(view[pos:pos + n])
            pos += n
            return chunk

        if take(4) != _MAGIC:
            raise ParseError("not a constraint-system blob", 0)
        version, modlen = struct.unpack(">HH", take(4))
        if version != _VERSION:
            raise ParseError("unsupported constraint-system version %d" % version, 4)
        modulus = int.from_bytes(take(modlen), "big")
        if field is None:
            field = PrimeField(modulus)
        elif field.modulus != modulus:
            raise ParseError("constraint system is over a different field", 8)
        num_public, num_aux, num_constraints = struct.unpack(">III", take(12))
        digest = take(32)
        cs = cls(field)
        cs.num_public, cs.num_aux = num_public, num_aux
        w = field.nbytes
        for i in range(num_public):
            (n,) = struct.unpack(">H", take(2))
            name = take(n).decode()
            if i and name:
                cs.names[i] = name
                cs._by_name[name] = Variable(i, cs.modulus, name)
        total = num_public + num_aux
        for _ in range(num_constraints):
            parts = []
            for _ in range(3):
                (count,) = struct.unpack(">I", take(4))
                terms = {}
                for _ in range(count):
                    start = pos
                    (idx,) = struct.unpack(">I", take(4))
                    coef = int.from_bytes(take(w), "big")
                    if idx >= total:
                        raise ParseError("wire index %d out of range" % idx, start)
                    if coef == 0 or coef >= modulus:
                        raise ParseError("bad coefficient", start + 4)
                    terms[idx] = mpz(coef)
                parts.append(terms)
            cs.constraints.append(Constraint(*parts))
        if pos != len(view):
            raise ParseError("trailing bytes after constraint system", pos)
        cs.seal()
        if cs.layout_hash != digest:
            raise ParseError("constraint-system digest mismatch", 20 + modlen)
        return cs


def allocate(cs: ConstraintSystem, kind: str = AUXILIARY, **kw) -> Variable:
    return cs.allocate(kind, **kw)


def enforce(cs: ConstraintSystem, a, b, c, label=None):
    cs.enforce(a, b, c, label)


def is_satisfied(cs: ConstraintSystem, t) -> bool:
    return cs.is_satisfied(t)
