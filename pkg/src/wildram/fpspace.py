"""Subspaces of F_p^n.

Subgroups of the elementary abelian group (Z/p)^n and, through the dot
pairing, the subfields of an Artin-Schreier tower.
"""

from __future__ import annotations

import itertools
from typing import Iterable, Iterator, Sequence

Vector = tuple


def rref(rows: Iterable[Sequence[int]], p: int, n: int) -> tuple:
    """Reduced row echelon form over F_p, zero rows dropped."""
    m = [[c % p for c in r] for r in rows]
    out = []
    col = 0
    r0 = 0
    while r0 < len(m) and col < n:
        piv = next((i for i in range(r0, len(m)) if m[i][col]), None)
        if piv is None:
            col += 1
            continue
        m[r0], m[piv] = m[piv], m[r0]
        inv = pow(m[r0][col], p - 2, p)
        m[r0] = [c * inv % p for c in m[r0]]
        for i in range(len(m)):
            if i != r0 and m[i][col]:
                f = m[i][col]
                m[i] = [(a - f * b) % p for a, b in zip(m[i], m[r0])]
        r0 += 1
        col += 1
    for r in m[:r0]:
        out.append(tuple(r))
    return tuple(out)


def nullspace(rows: Sequence[Sequence[int]], p: int, n: int) -> tuple:
    """Basis of {v : r . v = 0 for every row r}."""
    e = rref(rows, p, n)
    pivots = []
    for r in e:
        pivots.append(next(i for i, c in enumerate(r) if c))
    free = [c for c in range(n) if c not in pivots]
    basis = []
    for f in free:
        v = [0] * n
        v[f] = 1
        for r, pc in zip(e, pivots):
            v[pc] = (-r[f]) % p
        basis.append(tuple(v))
    return tuple(basis)


def dot(u: Sequence[int], v: Sequence[int], p: int) -> int:
    return sum(a * b for a, b in zip(u, v)) % p


def vectors(p: int, n: int) -> Iterator[Vector]:
    return itertools.product(range(p), repeat=n)


def lines(p: int, n: int) -> list:
    """Representatives of the 1-dimensional subspaces: first nonzero entry is 1."""
    out = []
    for v in vectors(p, n):
        nz = next((c for c in v if c), None)
        if nz == 1:
            out.append(v)
    return out


def normalize_line(v: Sequence[int], p: int) -> Vector:
    nz = next(c for c in v if c % p)
    inv = pow(nz, p - 2, p)
    return tuple(c * inv % p for c in v)


class Subspace:
    """An F_p-subspace of F_p^n stored by its canonical RREF basis."""

    __slots__ = ("p", "n", "basis")

    def __init__(self, p: int, n: int, basis: Iterable[Sequence[int]] = ()):
        self.p = p
        self.n = n
        self.basis = rref(basis, p, n)

    @classmethod
    def zero(cls, p: int, n: int) -> "Subspace":
        return cls(p, n)

    @classmethod
    def full(cls, p: int, n: int) -> "Subspace":
        return cls(p, n, [tuple(int(i == j) for j in range(n)) for i in range(n)])

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def order(self) -> int:
        return self.p**self.dim

    def is_zero(self) -> bool:
        return not self.basis

    def is_full(self) -> bool:
        return self.dim == self.n

    def __contains__(self, v) -> bool:
        return len(rref(self.basis + (tuple(v),), self.p, self.n)) == self.dim

    def elements(self) -> list:
        p = self.p
        out = []
        for coeffs in itertools.product(range(p), repeat=self.dim):
            v = [0] * self.n
            for c, b in zip(coeffs, self.basis):
                if c:
                    for i, x in enumerate(b):
                        v[i] = (v[i] + c * x) % p
            out.append(tuple(v))
        return out

    def __add__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return Subspace(self.p, self.n, self.basis + other.basis)

    def __and__(self, other: "Subspace") -> "Subspace":
        self._check(other)
        return (self.annihilator() + other.annihilator()).annihilator()

    def annihilator(self) -> "Subspace":
        """{v : <b, v> = 0 for all b in self} under the dot pairing."""
        return Subspace(self.p, self.n, nullspace(self.basis, self.p, self.n))

    def __le__(self, other: "Subspace") -> bool:
        self._check(other)
        return all(b in other for b in self.basis)

    def __lt__(self, other: "Subspace") -> bool:
        return self <= other and self.dim < other.dim

    def __eq__(self, other) -> bool:
        if not isinstance(other, Subspace):
            return NotImplemented
        return (self.p, self.n, self.basis) == (other.p, other.n, other.basis)

    def __hash__(self):
        return hash((self.p, self.n, self.basis))

    def image(self, matrix: Sequence[Sequence[int]], m: int | None = None) -> "Subspace":
        """Image under v -> matrix . v (matrix has m rows, n columns)."""
        m = len(matrix) if m is None else m
        rows = [tuple(dot(r, b, self.p) for r in matrix) for b in self.basis]
        return Subspace(self.p, m, rows)

    def _check(self, other):
        if (self.p, self.n) != (other.p, other.n):
            raise ValueError("subspaces of different ambient spaces")

    def to_json(self) -> list:
        return [list(b) for b in self.basis]

    @classmethod
    def from_json(cls, p: int, n: int, rows) -> "Subspace":
        return cls(p, n, rows)

    def __repr__(self):
        return f"Subspace(p={self.p}, n={self.n}, basis={[list(b) for b in self.basis]})"


def is_subspace(vecs: Iterable[Sequence[int]], p: int, n: int) -> bool:
    """Whether a set of vectors (assumed to contain 0) is closed under F_p-combinations."""
    s = {tuple(v) for v in vecs}
    span = Subspace(p, n, s)
    return len(s) == span.order and all(tuple(v) in s for v in span.elements())


def all_subspaces(p: int, n: int) -> list:
    """Every subspace of F_p^n, sorted by dimension then basis."""
    seen = {Subspace.zero(p, n)}
    frontier = list(seen)
    nonzero = [v for v in vectors(p, n) if any(v)]
    while frontier:
        nxt = []
        for s in frontier:
            for v in nonzero:
                if v not in s:
                    t = Subspace(p, n, s.basis + (v,))
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(seen, key=lambda s: (s.dim, s.basis))


def complement_basis(sub: Subspace) -> list:
    """Standard basis vectors completing ``sub`` to a basis of F_p^n."""
    out = []
    cur = sub
    for i in range(sub.n):
        e = tuple(int(i == j) for j in range(sub.n))
        if e not in cur:
            out.append(e)
            cur = Subspace(sub.p, sub.n, cur.basis + (e,))
    return out


def invert_matrix(mat: Sequence[Sequence[int]], p: int) -> list:
    """Inverse of a square matrix over F_p (raises ValueError if singular)."""
    n = len(mat)
    aug = [list(r) + [int(i == j) for j in range(n)] for i, r in enumerate(mat)]
    red = rref(aug, p, 2 * n)
    if len(red) != n or any(red[i][i] != 1 for i in range(n)):
        raise ValueError("singular matrix")
    return [list(r[n:]) for r in red]


def mat_vec(mat: Sequence[Sequence[int]], v: Sequence[int], p: int) -> Vector:
    return tuple(dot(r, v, p) for r in mat)
