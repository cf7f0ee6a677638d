"""Arithmetic in the finite field F_q, q = p^e.

Elements are plain ``int`` values.  For ``e == 1`` an element is its residue
in ``[0, p)``.  For ``e > 1`` the element ``c_0 + c_1*w + ... + c_{e-1}*w^(e-1)``
(``w`` a root of the pinned modulus) is encoded as ``c_0 + c_1*p + c_2*p^2 + ...``,
so the generator ``w`` is the integer ``p``.

Field objects are cached: ``field(p, e)`` always returns the same instance.
"""

from __future__ import annotations

import functools
from typing import Optional, Sequence, Union

__all__ = ["GF", "field", "MODULI", "SUPPORTED_PRIMES"]

SUPPORTED_PRIMES = (2, 3, 5, 7, 11, 13)

# Monic primitive moduli, coefficients lowest degree first (leading 1 included).
# Chosen as the first primitive polynomial in lexicographic order of the tail.
# Do not edit: serialized elements depend on these.
MODULI = {
    (2, 2): (1, 1, 1),
    (2, 3): (1, 0, 1, 1),
    (2, 4): (1, 0, 0, 1, 1),
    (3, 2): (2, 1, 1),
    (3, 3): (1, 0, 2, 1),
    (3, 4): (2, 0, 0, 1, 1),
    (5, 2): (2, 1, 1),
    (5, 3): (2, 0, 1, 1),
    (5, 4): (2, 0, 2, 1, 1),
    (7, 2): (3, 1, 1),
    (7, 3): (2, 1, 1, 1),
    (7, 4): (3, 0, 1, 1, 1),
    (11, 2): (2, 4, 1),
    (11, 3): (3, 0, 1, 1),
    (11, 4): (2, 0, 0, 4, 1),
    (13, 2): (2, 1, 1),
    (13, 3): (2, 0, 1, 1),
    (13, 4): (2, 0, 2, 6, 1),
}

_ADD_TABLE_LIMIT = 256

FqSerial = Union[int, list]


def _primitive_root(p: int) -> int:
    for g in range(1, p):
        if len({pow(g, k, p) for k in range(1, p)}) == p - 1:
            return g
    raise ValueError(p)


class GF:
    """The field F_{p^e} with a fixed primitive modulus.

    Holds the parameters (``p``, ``e``, ``q``) and all element operations.
    """

    def __init__(self, p: int, e: int = 1):
        if p not in SUPPORTED_PRIMES:
            raise ValueError(f"unsupported characteristic {p}; expected one of {SUPPORTED_PRIMES}")
        if not 1 <= e <= 4:
            raise ValueError(f"unsupported degree e={e}; expected 1 <= e <= 4")
        self.p = p
        self.e = e
        self.q = p**e
        self.modulus = MODULI.get((p, e), (0, 1))
        q = self.q

        self._digits = [self._to_digits_slow(a) for a in range(q)]
        if e == 1:
            g = _primitive_root(p) if p > 2 else 1
        else:
            g = p  # the class of w; moduli are primitive
        self.generator = g
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        a = 1
        for k in range(q - 1):
            exp[k] = a
            log[a] = k
            a = self._mul_slow(a, g)
        for k in range(q - 1, 2 * (q - 1)):
            exp[k] = exp[k - (q - 1)]
        self._exp = exp
        self._log = log

        if e == 1 or p == 2:
            self._add_table = None
        elif q <= _ADD_TABLE_LIMIT:
            self._add_table = [[self._add_slow(a, b) for b in range(q)] for a in range(q)]
        else:
            self._add_table = None
        self._neg = [self._neg_slow(a) for a in range(q)]
        self._frob = [self.pow(a, p) for a in range(q)]
        root = [0] * q
        for a in range(q):
            root[self._frob[a]] = a
        self._root = root

        as_roots: dict = {}
        for t in range(q):
            as_roots.setdefault(self.sub(self._frob[t], t), t)
        self._as_roots = as_roots

    # -- representation -------------------------------------------------

    def _to_digits_slow(self, a: int) -> tuple:
        out = []
        for _ in range(self.e):
            a, r = divmod(a, self.p)
            out.append(r)
        return tuple(out)

    def digits(self, a: int) -> tuple:
        """Coefficients of ``a`` in the power basis of ``w``, lowest first."""
        return self._digits[a]

    def from_digits(self, coeffs: Sequence[int]) -> int:
        if len(coeffs) > self.e:
            coeffs = self._reduce_poly(list(coeffs))
        out = 0
        for c in reversed(coeffs):
            out = out * self.p + (c % self.p)
        return out

    def _reduce_poly(self, c: list) -> list:
        p, e, mod = self.p, self.e, self.modulus
        c = [x % p for x in c]
        for d in range(len(c) - 1, e - 1, -1):
            t = c[d]
            if t:
                for k in range(e):
                    c[d - e + k] = (c[d - e + k] - t * mod[k]) % p
                c[d] = 0
        return c[:e]

    def _add_slow(self, a, b):
        da, db = self._digits[a], self._digits[b]
        return self.from_digits([x + y for x, y in zip(da, db)])

    def _neg_slow(self, a):
        return self.from_digits([-x for x in self._digits[a]])

    def _mul_slow(self, a, b):
        if self.e == 1:
            return a * b % self.p
        da, db = self._digits[a], self._digits[b]
        prod = [0] * (2 * self.e - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        return self.from_digits(self._reduce_poly(prod))

    # -- arithmetic -----------------------------------------------------

    def add(self, a: int, b: int) -> int:
        if self.e == 1:
            return (a + b) % self.p
        if self.p == 2:
            return a ^ b
        t = self._add_table
        if t is not None:
            return t[a][b]
        return self._add_slow(a, b)

    def neg(self, a: int) -> int:
        return self._neg[a]

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self._neg[b])

    def mul(self, a: int, b: int) -> int:
        if a == 0 or b == 0:
            return 0
        if self.e == 1:
            return a * b % self.p
        return self._exp[self._log[a] + self._log[b]]

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of 0 in F_q")
        if self.e == 1:
            return pow(a, self.p - 2, self.p)
        return self._exp[(self.q - 1 - self._log[a]) % (self.q - 1)]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, n: int) -> int:
        if a == 0:
            if n < 0:
                raise ZeroDivisionError("0 to a negative power")
            return 1 if n == 0 else 0
        return self._exp[(self._log[a] * n) % (self.q - 1)]

    def scalar(self, n: int) -> int:
        """Image of the integer ``n`` in the prime field."""
        return n % self.p

    def frobenius(self, a: int) -> int:
        """a^p."""
        return self._frob[a]

    def pth_root(self, a: int) -> int:
        """The unique b with b^p = a."""
        return self._root[a]

    def trace(self, a: int) -> int:
        """Absolute trace to F_p: a + a^p + ... + a^(p^(e-1))."""
        t, b = 0, a
        for _ in range(self.e):
            t = self.add(t, b)
            b = self._frob[b]
        return t

    def solve_as_constant(self, c: int) -> Optional[int]:
        """Smallest t with t^p - t = c, or None when no root lies in F_q."""
        return self._as_roots.get(c)

    def in_prime_field(self, a: int) -> bool:
        return a < self.p

    def elements(self) -> range:
        return range(self.q)

    # -- serialization --------------------------------------------------

    def serialize(self, a: int) -> FqSerial:
        if self.e == 1:
            return a
        return list(self._digits[a])

    def deserialize(self, v: FqSerial) -> int:
        if self.e == 1:
            if isinstance(v, list):
                if len(v) != 1:
                    raise ValueError(f"expected a single coefficient, got {v!r}")
                v = v[0]
            if not isinstance(v, int) or not 0 <= v < self.p:
                raise ValueError(f"{v!r} is not an element of F_{self.p}")
            return v
        if isinstance(v, int):
            v = [v]
        if len(v) > self.e or any(not isinstance(c, int) or not 0 <= c < self.p for c in v):
            raise ValueError(f"{v!r} is not an element of F_{self.q}")
        return self.from_digits(list(v))

    def format(self, a: int) -> str:
        if a < self.p:
            return str(a)
        return "[" + ",".join(str(c) for c in self._digits[a]) + "]"

    def __repr__(self):
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (field, (self.p, self.e))


@functools.lru_cache(maxsize=None)
def field(p: int, e: int = 1) -> GF:
    return GF(p, e)




