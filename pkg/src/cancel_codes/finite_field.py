"""Exact arithmetic in GF(q), q = p^m.

Elements are residue polynomials over GF(p) modulo a fixed monic irreducible
of degree m. Internally every element is encoded as the integer
``sum(c_i * p**i)``; :class:`FieldElement` wraps that integer for operator use,
while hot loops call the integer-level methods on :class:`Field` directly.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence

from .errors import DivisionByZero, NoPrimePower, NotAPrimePower

MAX_ORDER = 1 << 16


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def prime_power_decomposition(q: int) -> tuple[int, int] | None:
    """Return ``(p, m)`` with ``q == p**m``, or None if q is not a prime power."""
    if q < 2:
        return None
    p = next(d for d in range(2, q + 1) if q % d == 0)
    m, rest = 0, q
    while rest % p == 0:
        rest //= p
        m += 1
    return (p, m) if rest == 1 else None


def largest_prime_power_leq(x: int) -> int:
    """Largest prime power not exceeding ``x``."""
    if x < 2:
        raise NoPrimePower(f"no prime power <= {x}")
    for q in range(int(x), 1, -1):
        if prime_power_decomposition(q) is not None:
            return q
    raise NoPrimePower(f"no prime power <= {x}")  # pragma: no cover


# -- polynomials over GF(p) as coefficient lists, constant term first ---------

def _trim(c: list[int]) -> list[int]:
    while c and c[-1] == 0:
        c.pop()
    return c


def _poly_mod(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    """Remainder of a modulo b over GF(p); b must have a nonzero leading coefficient."""
    r = _trim([x % p for x in a])
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(r) - 1 >= db and r:
        shift = len(r) - 1 - db
        f = r[-1] * inv_lead % p
        for i, bc in enumerate(b):
            r[i + shift] = (r[i + shift] - f * bc) % p
        _trim(r)
    return r


def _poly_mul(a: Sequence[int], b: Sequence[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _trim(out)


def is_irreducible(poly: Sequence[int], p: int) -> bool:
    """Irreducibility over GF(p) by trial division with every monic divisor of degree <= deg/2."""
    f = _trim([c % p for c in poly])
    m = len(f) - 1
    if m < 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for low in product(range(p), repeat=d):
            if not _poly_mod(f, list(low) + [1], p):
                return False
    return True


def _smallest_irreducible(p: int, m: int) -> tuple[int, ...]:
    # lexicographic on the coefficient vector (constant term first), leading 1
    for low in product(range(p), repeat=m):
        cand = list(low) + [1]
        if is_irreducible(cand, p):
            return tuple(cand)
    raise AssertionError("irreducible polynomials exist in every degree")  # pragma: no cover


class Field:
    """The finite field GF(p^m).

    ``modulus`` is empty for prime fields. Two fields compare equal when they
    share characteristic, degree and modulus.
    """

    def __init__(self, p: int, m: int = 1, modulus: Sequence[int] = ()):
        if not _is_prime(p) or m < 1:
            raise NotAPrimePower(f"invalid characteristic/degree ({p}, {m})")
        if m > 1 and (len(modulus) != m + 1 or modulus[-1] != 1 or not is_irreducible(modulus, p)):
            raise ValueError(f"modulus {tuple(modulus)} is not a monic irreducible of degree {m}")
        self.p = p
        self.m = m
        self.q = p**m
        self.modulus = tuple(modulus) if m > 1 else ()
        self._exp: list[int] = []
        self._log: list[int] = []
        if m > 1:
            self._build_tables()

    # -- identity ------------------------------------------------------------
    def __eq__(self, other) -> bool:
        return isinstance(other, Field) and (self.p, self.m, self.modulus) == (other.p, other.m, other.modulus)

    def __hash__(self) -> int:
        return hash((self.p, self.m, self.modulus))

    def __repr__(self) -> str:
        if self.m == 1:
            return f"GF({self.q})"
        return f"GF({self.p}^{self.m}, modulus={self.modulus})"

    # -- encoding --------------------------------------------------------------
    def digits(self, v: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.m):
            v, r = divmod(v, self.p)
            out.append(r)
        return tuple(out)

    def from_digits(self, coeffs: Sequence[int]) -> int:
        v = 0
        for c in reversed(coeffs):
            v = v * self.p + c % self.p
        return v

    def _slow_mul(self, a: int, b: int) -> int:
        prod = _poly_mul(self.digits(a), self.digits(b), self.p)
        return self.from_digits(_poly_mod(prod, self.modulus, self.p))

    def _build_tables(self) -> None:
        n = self.q - 1
        for g in range(2, self.q):
            exp = [1]
            x = g
            while x != 1:
                exp.append(x)
                x = self._slow_mul(x, g)
            if len(exp) == n:
                break
        else:  # pragma: no cover
            raise AssertionError("multiplicative group is cyclic")
        log = [0] * self.q
        for i, x in enumerate(exp):
            log[x] = i
        self._exp = exp + exp
        self._log = log

    # -- integer-level arithmetic ------------------------------------------------
    def add(self, a: int, b: int) -> int:
        if self.m == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        return self.from_digits([x + y for x, y in zip(self.digits(a), self.digits(b))])

    def neg(self, a: int) -> int:
        if self.m == 1:
            return -a % self.p
        if self.p == 2:
            return a
        return self.from_digits([-x for x in self.digits(a)])

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def mul(self, a: int, b: int) -> int:
        if self.m == 1:
            return a * b % self.p
        if a == 0 or b == 0:
            return 0
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise DivisionByZero("inverse of zero")
        if self.m == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def power(self, a: int, e: int) -> int:
        if e < 0:
            return self.power(self.inv(a), -e)
        if a == 0:
            return 0 if e else 1
        if self.m == 1:
            return pow(a, e, self.p)
        return self._exp[self._log[a] * e % (self.q - 1)]

    def embed(self, n: int) -> int:
        """Image of the integer n under Z -> GF(p) -> GF(q)."""
        return n % self.p

    # -- element-level API -------------------------------------------------------
    def __call__(self, value: int | Sequence[int]) -> FieldElement:
        """Element from its integer encoding or from a coefficient vector."""
        if isinstance(value, int):
            if not 0 <= value < self.q:
                raise ValueError(f"encoding {value} out of range for {self!r}")
            return FieldElement(self, value)
        coeffs = list(value)
        if len(coeffs) > self.m:
            raise ValueError("too many coefficients")
        return FieldElement(self, self.from_digits(coeffs))

    @property
    def zero(self) -> FieldElement:
        return FieldElement(self, 0)

    @property
    def one(self) -> FieldElement:
        return FieldElement(self, 1)

    def elements(self) -> list[FieldElement]:
        """All q elements, lexicographic on the coefficient vector; zero first."""
        return [self(list(c)) for c in product(range(self.p), repeat=self.m)]

    def parse(self, text: str) -> FieldElement:
        parts = [int(s) for s in text.strip().split(",")]
        if len(parts) != self.m or any(not 0 <= c < self.p for c in parts):
            raise ValueError(f"bad element string {text!r} for {self!r}")
        return self(parts)


@dataclass(frozen=True)
class FieldElement:
    field: Field
    value: int

    @property
    def coeffs(self) -> tuple[int, ...]:
        return self.field.digits(self.value)

    def _coerce(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return self.field.embed(other)
        return NotImplemented

    def _wrap(self, v: int) -> FieldElement:
        return FieldElement(self.field, v)

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.div(o, self.value))

    def __neg__(self) -> FieldElement:
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, e: int) -> FieldElement:
        return self._wrap(self.field.power(self.value, e))

    def inverse(self) -> FieldElement:
        return self._wrap(self.field.inv(self.value))

    def __bool__(self) -> bool:
        return self.value != 0

    def __str__(self) -> str:
        return ",".join(str(c) for c in self.coeffs)

    def __repr__(self) -> str:
        return f"{self.field!r}({self})"


def field_arith(a: FieldElement, b: FieldElement | None, op: str) -> FieldElement:
    """Dispatch table form of the field operations (``add sub mul div neg inv``)."""
    ops = {
        "add": lambda: a + b,
        "sub": lambda: a - b,
        "mul": lambda: a * b,
        "div": lambda: a / b,
        "neg": lambda: -a,
        "inv": lambda: a.inverse(),
    }
    if op not in ops:
        raise ValueError(f"unknown field operation {op!r}")
    return ops[op]()


@lru_cache(maxsize=None)
def field_new(q: int) -> Field:
    """GF(q) with the lexicographically smallest monic irreducible modulus."""
    if q < 2:
        raise NotAPrimePower(f"q={q} is not a prime power")
    pm = prime_power_decomposition(q)
    if pm is None:
        raise NotAPrimePower(f"q={q} has two distinct prime factors")
    if q > MAX_ORDER:
        raise ValueError(f"q={q} exceeds the supported order {MAX_ORDER}")
    p, m = pm
    return Field(p, m, _smallest_irreducible(p, m) if m > 1 else ())


def enumerate_elements(f: Field) -> list[FieldElement]:
    return f.elements()


def elements_from(f: Field, values: Iterable[int]) -> list[FieldElement]:
    return [f(v) for v in values]
