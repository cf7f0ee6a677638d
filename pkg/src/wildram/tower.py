"""The top field S of an Artin-Schreier tower over K = F_q((x)).

S = K[T_1, ..., T_l] / (T_i^p - T_i - f_i) with reduced, F_p-independent
right-hand sides f_i.  The Galois group is F_p^l acting by T_i -> T_i + c_i.

Elements are stored as nested tuples: an element of L_k = K(T_1..T_k) is a
tuple of p elements of L_{k-1} (the coefficients of 1, T_k, ..., T_k^(p-1)),
and L_0 = K holds ``LaurentSeries``.  ``None`` is the exact zero at every
level.

Two independent valuations are provided:

* ``norm_valuation``: v_S(z) = v_K(N_{S/K}(z)), the norm computed by iterated
  degree-p resultants (determinants of multiplication matrices).
* ``Frame.valuation``: re-present S by generators w_k = T_k - s_k whose
  relative Artin-Schreier equations are reduced over L_{k-1}; the monomials
  x^n w^e then have pairwise distinct valuations and v_S is a minimum.
"""

from __future__ import annotations

import functools
import itertools
import math
from dataclasses import dataclass, field as dc_field
from typing import Callable, Optional, Sequence

from . import fpspace
from .asred import TowerValidation, reduce_rhs, validate_tower
from .errors import (InvalidTower, NotMonogenicCertified, NotTotallyRamified,
                     PrecisionExhausted, PreconditionFailed, ResidueSplit)
from .ffield import GF, field
from .fpspace import Subspace
from .laurent import INF, LaurentSeries, default_window, format_series, parse_series

# ---------------------------------------------------------------------------
# nested arithmetic


def _z(s):
    """Normalize a level-0 value: exact zero becomes None."""
    if s is None or (s.exact and not s.coeffs):
        return None
    return s


def _tup(seq):
    return None if all(c is None for c in seq) else tuple(seq)


class Presentation:
    """Arithmetic in K[t_1..t_k]/(t_i^p - t_i - r_i), r_i in K[t_1..t_(i-1)].

    ``rels[i]`` is the nested element (level i) of the relation for t_(i+1).
    """

    def __init__(self, F: GF, rels: Sequence = ()):
        self.F = F
        self.p = F.p
        self.rels = list(rels)

    # constants -------------------------------------------------------

    def one(self, k):
        return _lift(LaurentSeries.one(self.F), 0, k, self.p)

    def add(self, a, b, k):
        if a is None:
            return b
        if b is None:
            return a
        if k == 0:
            return _z(a + b)
        return _tup([self.add(x, y, k - 1) for x, y in zip(a, b)])

    def neg(self, a, k):
        if a is None:
            return None
        if k == 0:
            return -a
        return tuple(self.neg(x, k - 1) for x in a)

    def sub(self, a, b, k):
        return self.add(a, self.neg(b, k), k)

    def scale(self, a, c, k):
        """Multiply by a constant c of F_q."""
        if a is None or c == 0:
            return None
        if c == 1:
            return a
        if k == 0:
            return _z(a.scale(c))
        return _tup([self.scale(x, c, k - 1) for x in a])

    def smul(self, a, s, k):
        """Multiply by a series s of K."""
        if a is None or s is None:
            return None
        if k == 0:
            return _z(a * s)
        return _tup([self.smul(x, s, k - 1) for x in a])

    def mul(self, a, b, k):
        if a is None or b is None:
            return None
        if k == 0:
            return _z(a * b)
        p = self.p
        conv = [None] * (2 * p - 1)
        for i, ai in enumerate(a):
            if ai is None:
                continue
            for j, bj in enumerate(b):
                if bj is None:
                    continue
                conv[i + j] = self.add(conv[i + j], self.mul(ai, bj, k - 1), k - 1)
        r = self.rels[k - 1]
        for d in range(2 * p - 2, p - 1, -1):
            c = conv[d]
            if c is None:
                continue
            conv[d] = None
            conv[d - p + 1] = self.add(conv[d - p + 1], c, k - 1)
            conv[d - p] = self.add(conv[d - p], self.mul(c, r, k - 1), k - 1)
        return _tup(conv[:p])

    def pow(self, a, n, k):
        if n < 0:
            raise ValueError("negative power in a presentation")
        result = self.one(k)
        base = a
        while n:
            if n & 1:
                result = self.mul(result, base, k)
            n >>= 1
            if n:
                base = self.mul(base, base, k)
        return result

    def mul_t(self, a, k):
        """Multiply by the top generator t_k."""
        if a is None:
            return None
        p = self.p
        top = a[p - 1]
        out = [None] + list(a[:p - 1])
        if top is not None:
            out[1] = self.add(out[1], top, k - 1)
            out[0] = self.mul(top, self.rels[k - 1], k - 1)
        return _tup(out)

    def shift(self, a, c, k):
        """Substitute t_k -> t_k + c for c in F_p (valid when r_k is fixed)."""
        if a is None or c % self.p == 0:
            return a
        p = self.p
        out = [None] * p
        for i, ai in enumerate(a):
            if ai is None:
                continue
            for j in range(i + 1):
                coef = math.comb(i, j) * pow(c, i - j, p) % p
                if coef:
                    out[j] = self.add(out[j], self.scale(ai, coef, k - 1), k - 1)
        return _tup(out)

    def norm_down(self, a, k):
        """N_{L_k/L_(k-1)}(a) as the determinant of multiplication by a."""
        if a is None:
            return None
        p = self.p
        cols = []
        cur = a
        for _ in range(p):
            cols.append(cur)
            cur = self.mul_t(cur, k)
        matrix = [[(cols[j][i] if cols[j] is not None else None) for j in range(p)] for i in range(p)]
        return determinant(matrix, RingOps(self, k - 1))


def _lift(a, i, k, p):
    for _ in range(k - i):
        if a is None:
            return None
        a = (a,) + (None,) * (p - 1)
    return a


def _project(a, k, i):
    """Inverse of lift: read an element of level i out of level k."""
    for _ in range(k - i):
        if a is None:
            return None
        if any(c is not None for c in a[1:]):
            raise ValueError("element does not lie in the subfield")
        a = a[0]
    return a


class RingOps:
    """The ring operations of one level, for generic algorithms."""

    def __init__(self, pres: Presentation, k: int):
        self.pres, self.k = pres, k

    def add(self, a, b):
        return self.pres.add(a, b, self.k)

    def mul(self, a, b):
        return self.pres.mul(a, b, self.k)

    def neg(self, a):
        return self.pres.neg(a, self.k)


def determinant(matrix, ops) -> object:
    """Division-free determinant by Laplace expansion memoized on row subsets.

    Entries may be None (zero).  Cost is O(2^n n) ring multiplications.
    """
    n = len(matrix)
    minors = {0: "one"}
    # minors[mask]: det of rows in mask against columns 0..popcount-1
    for size in range(1, n + 1):
        col = size - 1
        new = {}
        for mask in _masks(n, size):
            acc = None
            rows = [r for r in range(n) if mask >> r & 1]
            for pos, r in enumerate(rows):
                entry = matrix[r][col]
                if entry is None:
                    continue
                sub = minors.get(mask & ~(1 << r))
                if sub is None:
                    continue
                term = entry if sub == "one" else ops.mul(entry, sub)
                if (pos + col) % 2:
                    term = ops.neg(term)
                acc = ops.add(acc, term)
            if acc is not None:
                new[mask] = acc
        minors = new
    return minors.get((1 << n) - 1)


@functools.lru_cache(maxsize=None)
def _masks(n, size):
    return tuple(sum(1 << i for i in c) for c in itertools.combinations(range(n), size))


# ---------------------------------------------------------------------------
# towers


def _as_series(F, s):
    if isinstance(s, LaurentSeries):
        return s
    if isinstance(s, str):
        return parse_series(s, F)
    raise TypeError(f"cannot read a series from {type(s).__name__}")


class ASTower:
    """A validated, totally ramified Artin-Schreier tower over F_q((x))."""

    def __init__(self, params: GF, rhs: Sequence, tame_index: int = 1):
        F = params
        self.params = F
        self.p = F.p
        if tame_index < 1 or math.gcd(tame_index, F.p) != 1:
            raise ValueError(f"tame index {tame_index} must be positive and prime to p={F.p}")
        self.tame_index = tame_index
        series = [_as_series(F, s) for s in rhs]
        for s in series:
            if s.field is not F:
                raise ValueError("right-hand side over a different field")
        self.validation: TowerValidation = validate_tower(series)
        if not self.validation.ok:
            raise InvalidTower("right-hand sides do not define a totally ramified extension",
                               self.validation)
        self.rhs: tuple = tuple(reduce_rhs(s) for s in series)
        self.fs: tuple = tuple(r.f for r in self.rhs)
        self.ell = len(series)
        p = F.p
        self.pres = Presentation(F, [_lift(_z(f), 0, k, p) for k, f in enumerate(self.fs)])

    @classmethod
    def from_strings(cls, p: int, e: int, rhs: Sequence[str], tame_index: int = 1) -> "ASTower":
        return cls(field(p, e), rhs, tame_index)

    # -- basic data -----------------------------------------------------

    @property
    def degree(self) -> int:
        return self.p**self.ell

    @property
    def line_breaks(self) -> dict:
        return dict(self.validation.lines)

    def all_breaks_one(self) -> bool:
        return self.ell > 0 and all(m == 1 for m in self.validation.lines.values())

    def group(self) -> Subspace:
        return Subspace.full(self.p, self.ell)

    def group_elements(self) -> list:
        return [tuple(c) for c in fpspace.vectors(self.p, self.ell)]

    def __eq__(self, other):
        if not isinstance(other, ASTower):
            return NotImplemented
        return (self.params is other.params and self.fs == other.fs
                and self.tame_index == other.tame_index)

    def __hash__(self):
        return hash((self.p, self.params.e, self.fs, self.tame_index))

    def __repr__(self):
        return f"ASTower({self.params!r}, {[format_series(f) for f in self.fs]}, tame_index={self.tame_index})"

    # -- elements -------------------------------------------------------

    def const(self, s) -> "TowerElement":
        s = _as_series(self.params, s) if not isinstance(s, int) else (
            LaurentSeries.monomial(self.params, s, 0))
        return TowerElement(self, _lift(_z(s), 0, self.ell, self.p))

    def one(self) -> "TowerElement":
        return self.const(LaurentSeries.one(self.params))

    def zero(self) -> "TowerElement":
        return TowerElement(self, None)

    def x(self) -> "TowerElement":
        return self.const(LaurentSeries.x(self.params))

    def gen(self, i: int) -> "TowerElement":
        """The generator T_i, 1 <= i <= l."""
        if not 1 <= i <= self.ell:
            raise IndexError(i)
        one = LaurentSeries.one(self.params)
        a = _lift(one, 0, i - 1, self.p)
        a = (None, a) + (None,) * (self.p - 2)
        return TowerElement(self, _lift(a, i, self.ell, self.p))

    def element(self, coeffs: dict) -> "TowerElement":
        """Build sum c_e T^e from {exponent tuple: series}."""
        out = self.zero()
        for mono, s in coeffs.items():
            term = self.const(_as_series(self.params, s))
            for i, ei in enumerate(mono, start=1):
                if ei:
                    term = term * self.gen(i) ** ei
            out = out + term
        return out

    # -- serialization --------------------------------------------------

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "p": self.p,
            "e": self.params.e,
            "tame_index": self.tame_index,
            "rhs": [format_series(f) for f in self.fs],
        }

    @classmethod
    def from_json(cls, d: dict) -> "ASTower":
        return cls(field(int(d["p"]), int(d.get("e", 1))), list(d.get("rhs", [])),
                   int(d.get("tame_index", 1)))

    # -- derived structures ---------------------------------------------

    @functools.cached_property
    def frame(self) -> "Frame":
        return Frame(self)

    def recombine(self, matrix: Sequence[Sequence[int]], tame_index: int | None = None) -> "ASTower":
        """Tower on the generators sum_i M[k][i] T_i (rows of an F_p-matrix).

        The group coordinates transform by c -> M c.
        """
        from .asred import combine

        rhs = [combine(self.fs, row) for row in matrix] if self.ell else []
        return ASTower(self.params, rhs, self.tame_index if tame_index is None else tame_index)


class TowerElement:
    """Element of S in the monomial basis T_1^e_1 ... T_l^e_l, 0 <= e_i < p."""

    __slots__ = ("tower", "data")

    def __init__(self, tower: ASTower, data):
        self.tower = tower
        self.data = data

    def _wrap(self, data):
        return TowerElement(self.tower, data)

    def _coerce(self, other):
        if isinstance(other, TowerElement):
            if other.tower is not self.tower:
                raise ValueError("elements of different towers")
            return other.data
        if isinstance(other, (LaurentSeries, int)):
            return self.tower.const(other).data
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.tower.pres.add(self.data, o, self.tower.ell))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.tower.pres.sub(self.data, o, self.tower.ell))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return self._wrap(self.tower.pres.neg(self.data, self.tower.ell))

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return self._wrap(self.tower.pres.smul(self.data, _z(other), self.tower.ell))
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self._wrap(self.tower.pres.mul(self.data, o, self.tower.ell))

    __rmul__ = __mul__

    def scale(self, c: int) -> "TowerElement":
        """Multiply by a constant of F_q."""
        return self._wrap(self.tower.pres.scale(self.data, c, self.tower.ell))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return self._wrap(self.tower.pres.pow(self.data, n, self.tower.ell))

    def __eq__(self, other):
        if not isinstance(other, TowerElement):
            return NotImplemented
        return self.tower is other.tower and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def is_zero(self) -> bool:
        return self.data is None

    def is_known_zero(self) -> bool:
        """Zero on the known window (exact zero or only O(x^k) coefficients)."""
        return all(not s.coeffs for s in self.coeffs.values())

    @property
    def coeffs(self) -> dict:
        """{(e_1, ..., e_l): LaurentSeries} over nonzero monomials."""
        out = {}
        ell = self.tower.ell

        def walk(a, k, suffix):
            if a is None:
                return
            if k == 0:
                out[suffix] = a
                return
            for i, c in enumerate(a):
                walk(c, k - 1, (i,) + suffix)

        walk(self.data, ell, ())
        return dict(sorted(out.items()))

    def constant_part(self) -> Optional[LaurentSeries]:
        a = self.data
        for _ in range(self.tower.ell):
            if a is None:
                return None
            a = a[0]
        return a

    def lies_in(self, i: int) -> bool:
        """Whether the element lies in L_i = K(T_1, ..., T_i)."""
        return all(all(e == 0 for e in mono[i:]) for mono in self.coeffs)

    def galois(self, sigma: Sequence[int]) -> "TowerElement":
        return galois_apply(sigma, self)

    def norm(self) -> LaurentSeries:
        return norm(self)

    def valuation(self):
        return norm_valuation(self)

    def inverse(self) -> "TowerElement":
        tower = self.tower
        if self.data is None:
            raise ZeroDivisionError("inverse of zero in S")
        conj = tower.one()
        for c in tower.group_elements():
            if any(c):
                conj = conj * self.galois(c)
        nrm = (self * conj)
        n0 = nrm.constant_part()
        rest = nrm - tower.const(n0) if n0 is not None else nrm
        if not rest.is_known_zero() or n0 is None:
            raise PrecisionExhausted("conjugate product did not land in K",
                                     window=default_window(), suggested=2 * default_window())
        return conj * n0.inverse()

    def __repr__(self):
        parts = []
        for mono, s in self.coeffs.items():
            m = "*".join(f"T{i + 1}^{e}" if e > 1 else f"T{i + 1}" for i, e in enumerate(mono) if e)
            parts.append(f"({format_series(s)})" + (f"*{m}" if m else ""))
        return " + ".join(parts) if parts else "0"

    def to_json(self) -> list:
        return [{"monomial": list(m), "coeff": format_series(s)} for m, s in self.coeffs.items()]


def elem_arith(op: str, a: TowerElement, b: TowerElement) -> TowerElement:
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "sub":
        return a - b
    raise ValueError(f"unknown operation {op!r}")


def galois_apply(sigma: Sequence[int], z: TowerElement) -> TowerElement:
    """Apply T_i -> T_i + c_i."""
    tower = z.tower
    sigma = tuple(int(c) % tower.p for c in sigma)
    if len(sigma) != tower.ell:
        raise ValueError(f"group element {sigma} has wrong length for l={tower.ell}")
    pres = tower.pres

    def rec(a, k):
        if a is None or k == 0 or not any(sigma[:k]):
            return a
        inner = _tup([rec(c, k - 1) for c in a])
        return pres.shift(inner, sigma[k - 1], k)

    return TowerElement(tower, rec(z.data, tower.ell))


def norm(z: TowerElement) -> LaurentSeries:
    """N_{S/K}(z) by iterated resultants down the tower."""
    tower = z.tower
    a = z.data
    for k in range(tower.ell, 0, -1):
        a = tower.pres.norm_down(a, k)
    return a if a is not None else LaurentSeries.zero(tower.params)


def norm_by_conjugates(z: TowerElement) -> LaurentSeries:
    """N_{S/K}(z) as the product of all Galois conjugates."""
    tower = z.tower
    out = tower.one()
    for c in tower.group_elements():
        out = out * z.galois(c)
    n0 = out.constant_part()
    rest = out - tower.const(n0) if n0 is not None else out
    if not rest.is_known_zero():
        raise AssertionError("conjugate product is not in K")
    return n0 if n0 is not None else LaurentSeries.zero(tower.params)


def norm_full_matrix(z: TowerElement) -> LaurentSeries:
    """N_{S/K}(z) as one p^l x p^l determinant over K (small towers only)."""
    tower = z.tower
    basis = sorted(itertools.product(range(tower.p), repeat=tower.ell))
    monos = {}
    for mono in basis:
        monos[mono] = tower.element({mono: LaurentSeries.one(tower.params)})
    cols = [(z * monos[m]).coeffs for m in basis]
    matrix = [[_z(cols[j].get(basis[i])) for j in range(len(basis))] for i in range(len(basis))]
    base = Presentation(tower.params)
    d = determinant(matrix, RingOps(base, 0))
    return d if d is not None else LaurentSeries.zero(tower.params)


def norm_valuation(z: TowerElement):
    """v_S(z), normalized so that v_S(x) = p^l."""
    if z.data is None:
        return INF
    return norm(z).valuation()


# ---------------------------------------------------------------------------
# the frame: a valuation basis built level by level


class Frame:
    """Generators w_k = T_k - s_k with reduced relative equations.

    ``breaks[k-1]`` is b_k = -v_(k-1)(w_k^p - w_k), prime to p, so that
    v_S(w_k) = -b_k p^(l-k) and the monomials x^n w^e (0 <= e_k < p) have
    pairwise distinct valuations.
    """

    def __init__(self, tower: ASTower):
        self.tower = tower
        F, p, ell = tower.params, tower.p, tower.ell
        self.F, self.p, self.ell = F, p, ell
        self.wpres = Presentation(F, [])
        self.breaks: list = []
        self.s_T: list = []   # level k-1 nested, T-coordinates
        self.s_W: list = []   # level k-1 nested, w-coordinates
        self.w_T: list = []   # level k nested, T-coordinates
        self._build()

    # -- coordinates ----------------------------------------------------

    def to_w(self, a, i):
        """T-coordinates -> w-coordinates at level i."""
        if a is None or i == 0:
            return a
        shift = _tup([self.s_W[i - 1], _lift(LaurentSeries.one(self.F), 0, i - 1, self.p)]
                     + [None] * (self.p - 2))
        acc = None
        for j in range(self.p - 1, -1, -1):
            if acc is not None:
                acc = self.wpres.mul(acc, shift, i)
            c = self.to_w(a[j], i - 1)
            if c is not None:
                acc = self.wpres.add(acc, _lift(c, i - 1, i, self.p), i)
        return acc

    def monomial_valuation(self, e: Sequence[int], i: int) -> int:
        """v_i(w^e) for an exponent vector of length i."""
        return sum(ek * (-self.breaks[k] * self.p ** (i - 1 - k)) for k, ek in enumerate(e))

    def lead_w(self, aw, i):
        """(valuation, exponents, x-exponent, coefficient) of the leading term."""
        if aw is None:
            return INF, None, None, None
        best = None
        bound = INF
        P = self.p**i

        def walk(a, k, suffix):
            nonlocal best, bound
            if a is None:
                return
            if k == 0:
                mv = self.monomial_valuation(suffix, i)
                if a.coeffs:
                    v = P * a.lead + mv
                    if best is None or v < best[0]:
                        best = (v, suffix, a.lead, a.coeffs[0])
                else:
                    bound = min(bound, P * a.prec + mv)
                return
            for j, c in enumerate(a):
                walk(c, k - 1, (j,) + suffix)

        walk(aw, i, ())
        if best is None or best[0] >= bound:
            raise PrecisionExhausted("frame valuation undecidable on the known window",
                                     window=default_window(), suggested=2 * default_window())
        return best

    def solve_monomial(self, v: int, i: int):
        """The unique (e, n) with v_i(x^n w^e) = v."""
        e = [0] * i
        t = v
        for k in range(i, 0, -1):
            b = self.breaks[k - 1]
            ek = (-t * pow(b, -1, self.p)) % self.p
            e[k - 1] = ek
            t = (t + ek * b) // self.p
        return tuple(e), t

    def monomial_T(self, e, n, i):
        p = self.p
        out = _lift(LaurentSeries.monomial(self.F, 1, n), 0, i, p)
        for k, ek in enumerate(e, start=1):
            if ek:
                wk = _lift(self.w_T[k - 1], k, i, p)
                out = self.tower.pres.mul(out, self.tower.pres.pow(wk, ek, i), i)
        return out

    def monomial_W(self, e, n, i):
        p = self.p
        a = LaurentSeries.monomial(self.F, 1, n)
        for k in range(1, i + 1):
            slots = [None] * p
            slots[e[k - 1]] = a
            a = tuple(slots)
        return a

    # -- construction ---------------------------------------------------

    def _build(self):
        tower, p, F = self.tower, self.p, self.F
        tp = tower.pres
        for k in range(1, self.ell + 1):
            i = k - 1
            z = _lift(_z(tower.fs[k - 1]), 0, i, p)
            s_T = s_W = None
            while True:
                zw = self.to_w(z, i)
                v, e, n, lc = self.lead_w(zw, i)
                if v >= 0:
                    raise NotTotallyRamified(f"generator T_{k} is not ramified over L_{i}")
                if v % p:
                    break
                e2, n2 = self.solve_monomial(v // p, i)
                mT, mW = self.monomial_T(e2, n2, i), self.monomial_W(e2, n2, i)
                v3, e3, n3, lcm = self.lead_w(self.wpres.pow(mW, p, i), i)
                if (v3, e3, n3) != (v, e, n):
                    raise AssertionError("frame monomials are not valuation-distinct")
                c = F.pth_root(F.div(lc, lcm))
                cm = tp.scale(mT, c, i)
                z = tp.sub(z, tp.sub(tp.pow(cm, p, i), cm, i), i)
                s_T = tp.add(s_T, cm, i)
                s_W = self.wpres.add(s_W, self.wpres.scale(mW, c, i), i)
            self.breaks.append(-v)
            self.s_T.append(s_T)
            self.s_W.append(s_W)
            self.wpres.rels.append(zw)
            one = _lift(LaurentSeries.one(F), 0, i, p)
            self.w_T.append(_tup([tp.neg(s_T, i), one] + [None] * (p - 2)))

    # -- public ---------------------------------------------------------

    def valuation(self, z: TowerElement):
        """v_S(z) from the w-expansion."""
        if z.data is None:
            return INF
        return self.lead_w(self.to_w(z.data, self.ell), self.ell)[0]

    def w(self, k: int) -> TowerElement:
        return TowerElement(self.tower, _lift(self.w_T[k - 1], k, self.ell, self.p))

    def monomial(self, e: Sequence[int], n: int) -> TowerElement:
        return TowerElement(self.tower, self.monomial_T(tuple(e), n, self.ell))

    def uniformizer(self) -> TowerElement:
        e, n = self.solve_monomial(1, self.ell)
        return self.monomial(e, n)

    def integral_basis(self) -> list:
        """x^(n_e) w^e with valuations exactly 0, 1, ..., p^l - 1."""
        P = self.p**self.ell
        out = []
        for v in range(P):
            e, n = self.solve_monomial(v, self.ell)
            out.append(self.monomial(e, n))
        return out

    def expansion(self, z: TowerElement) -> dict:
        """{exponent tuple: series} in the w-basis."""
        return TowerElement(self.tower, self.to_w(z.data, self.ell)).coeffs


# ---------------------------------------------------------------------------
# the reduction chain for towers whose lines all have break 1


@dataclass
class ClaimState:
    """Level-i data of the uniformizer construction for break-1 towers.

    ``betas[j]`` satisfies beta^p - beta = c[j] / y + d[j] with y the current
    uniformizer of L_i (``x`` at level 0, else ``beta_{i-1,i}^{-1}``).
    """

    tower: ASTower
    level: int
    y: TowerElement
    y_inverse: TowerElement
    betas: dict
    c: dict
    d: dict
    history: list = dc_field(default_factory=list)


def claim_initial_state(tower: ASTower) -> ClaimState:
    if not tower.all_breaks_one():
        raise PreconditionFailed("the reduction chain needs every line of the tower to have break 1")
    F = tower.params
    betas, c, d = {}, {}, {}
    x = tower.x()
    xinv = tower.const(LaurentSeries.monomial(F, 1, -1))
    for j in range(1, tower.ell + 1):
        f = tower.fs[j - 1]
        betas[j] = tower.gen(j)
        c[j] = f.coefficient(-1)
        d[j] = f.coefficient(0)
        if f != LaurentSeries.from_dict(F, {-1: c[j], 0: d[j]}):
            raise AssertionError(f"reduced f_{j} is not of the form c/x + d")
    state = ClaimState(tower, 0, x, xinv, betas, c, d)
    _check_claim_state(state)
    return state


def _wp(z: TowerElement) -> TowerElement:
    return z ** z.tower.p - z


def _check_claim_state(state: ClaimState) -> None:
    tower = state.tower
    p, ell, i = tower.p, tower.ell, state.level
    for j, beta in state.betas.items():
        rhs = _wp(beta)
        expect = state.y_inverse.scale(state.c[j]) + tower.const(state.d[j])
        if rhs != expect:
            raise AssertionError(f"beta_{i},{j}^p - beta_{i},{j} is not c/y_{i} + d")
        if not rhs.lies_in(i):
            raise AssertionError(f"beta_{i},{j}^p - beta_{i},{j} is not in L_{i}")
        if norm_valuation(rhs) != -p ** (ell - i):
            raise AssertionError(f"v_{i}(beta_{i},{j}^p - beta_{i},{j}) != -1")
    if i + 1 in state.betas and norm_valuation(state.betas[i + 1]) != -p ** (ell - i - 1):
        raise AssertionError(f"v_{i + 1}(beta_{i},{i + 1}) != -1")


def claim_reduction_step(state: ClaimState) -> ClaimState:
    """Pass from level i to level i+1: beta_{i+1,j} = beta_{i,j} - a_j beta_{i,i+1}."""
    tower = state.tower
    F = tower.params
    i = state.level
    if i >= tower.ell:
        raise PreconditionFailed("reduction chain already complete")
    pivot = state.betas[i + 1]
    betas, c, d, step = {}, {}, {}, {}
    for j in range(i + 2, tower.ell + 1):
        a = F.pth_root(F.div(state.c[j], state.c[i + 1]))
        ap = F.frobenius(a)
        if a == ap:
            raise ResidueSplit(
                f"a_{j} = a_{j}^p at level {i}: the pair (beta_{i},{i + 1}, beta_{i},{j}) "
                "gives a residue field extension", j=j, a_j=F.serialize(a))
        betas[j] = state.betas[j] - pivot.scale(a)
        c[j] = F.sub(a, ap)
        d[j] = F.sub(state.d[j], F.mul(ap, state.d[i + 1]))
        step[j] = F.serialize(a)
    y = pivot.inverse()
    new = ClaimState(tower, i + 1, y, pivot, betas, c, d, state.history + [step])
    _check_claim_state(new)
    return new


def claim_chain(tower: ASTower) -> ClaimState:
    state = claim_initial_state(tower)
    while state.level < tower.ell:
        state = claim_reduction_step(state)
    return state


def uniformizer(tower: ASTower) -> TowerElement:
    """An element of v_S-valuation 1.

    Break-1 towers use the reduction chain (y_l = beta_{l-1,l}^{-1}); all other
    towers use the frame monomial x^n w^e of valuation 1.
    """
    if tower.ell == 0:
        pi = tower.x()
    elif tower.all_breaks_one():
        pi = claim_chain(tower).y
    else:
        pi = tower.frame.uniformizer()
    v = norm_valuation(pi)
    if v != 1:
        raise AssertionError(f"constructed uniformizer has valuation {v}")
    return pi


# ---------------------------------------------------------------------------
# ramification filtration


@dataclass
class RamificationFiltration:
    """Lower-numbering filtration G_0 >= G_1 >= ... of a subgroup of F_p^n.

    ``groups[i]`` is G_i for 0 <= i < len(groups); the last entry is the
    trivial group and G_i is trivial for every larger i.
    """

    group: Subspace
    groups: list
    jumps: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        groups = list(self.groups)
        while len(groups) > 1 and groups[-1].is_zero() and groups[-2].is_zero():
            groups.pop()
        if not groups or not groups[-1].is_zero():
            groups.append(Subspace.zero(self.group.p, self.group.n))
        self.groups = groups

    @property
    def p(self):
        return self.group.p

    def G(self, i: int) -> Subspace:
        if i < 0:
            return self.group
        if i >= len(self.groups):
            return Subspace.zero(self.group.p, self.group.n)
        return self.groups[i]

    def breaks(self) -> list:
        """Indices i with G_i != G_(i+1)."""
        return [i for i in range(len(self.groups)) if self.G(i) != self.G(i + 1)]

    def __eq__(self, other):
        if not isinstance(other, RamificationFiltration):
            return NotImplemented
        n = max(len(self.groups), len(other.groups))
        return self.group == other.group and all(self.G(i) == other.G(i) for i in range(n + 1))

    def to_json(self) -> list:
        return [{"i": i, "order": g.order, "basis": g.to_json()} for i, g in enumerate(self.groups)]

    def orders(self) -> list:
        return [g.order for g in self.groups]


def filtration_from_jumps(group: Subspace, jumps: dict) -> RamificationFiltration:
    """G_i = {sigma : j(sigma) >= i+1} together with the identity."""
    p, n = group.p, group.n
    top = max(jumps.values(), default=0)
    groups = []
    for i in range(top + 1):
        members = [c for c, j in jumps.items() if j >= i + 1]
        zero = tuple([0] * n)
        if not fpspace.is_subspace(members + [zero], p, n):
            raise AssertionError(f"G_{i} is not a subgroup: {members}")
        groups.append(Subspace(p, n, members))
    if not groups:
        groups = [Subspace.zero(p, n)]
    return RamificationFiltration(group, groups, dict(jumps))


def ramification_filtration(tower: ASTower, method: str = "norm",
                            subgroup: Subspace | None = None) -> RamificationFiltration:
    """The filtration from v_S(sigma(pi) - pi) for a uniformizer pi.

    ``method`` picks the valuation: ``"norm"`` (iterated resultants) or
    ``"frame"`` (w-expansion).  With ``subgroup`` only those sigma are used.
    """
    if method == "norm":
        val: Callable = norm_valuation
    elif method == "frame":
        val = tower.frame.valuation
    else:
        raise ValueError(f"unknown valuation method {method!r}")
    group = subgroup if subgroup is not None else tower.group()
    if tower.ell == 0:
        return RamificationFiltration(group, [Subspace.zero(tower.p, 0)], {})
    pi = uniformizer(tower)
    jumps = {}
    for c in group.elements():
        if any(c):
            jumps[c] = val(galois_apply(c, pi) - pi)
    filt = filtration_from_jumps(group, jumps)
    if subgroup is None and (filt.G(0) != group or filt.G(1) != group):
        raise AssertionError("tower is not fully wild: G_1 != G")
    return filt


def different_hilbert(filt: RamificationFiltration) -> int:
    """sum_{i >= 0} (|G_i| - 1)."""
    return sum(g.order - 1 for g in filt.groups)


def _poly_ops(F):
    """Polynomials in X over K as lists of (None | LaurentSeries), low first."""
    zero = None

    def add(a, b):
        if a is None:
            return b
        if b is None:
            return a
        n = max(len(a), len(b))
        out = []
        for i in range(n):
            x = a[i] if i < len(a) else None
            y = b[i] if i < len(b) else None
            out.append(x if y is None else (y if x is None else _z(x + y)))
        return out if any(c is not None for c in out) else zero

    def mul(a, b):
        if a is None or b is None:
            return zero
        out = [None] * (len(a) + len(b) - 1)
        for i, x in enumerate(a):
            if x is None:
                continue
            for j, y in enumerate(b):
                if y is None:
                    continue
                t = _z(x * y)
                out[i + j] = t if out[i + j] is None else _z(out[i + j] + t) if t is not None else out[i + j]
        return out if any(c is not None for c in out) else zero

    def neg(a):
        return None if a is None else [None if c is None else -c for c in a]

    class Ops:
        pass

    ops = Ops()
    ops.add, ops.mul, ops.neg = add, mul, neg
    return ops


def minimal_polynomial(pi: TowerElement) -> list:
    """Characteristic polynomial of pi over K (l = 1), low degree first.

    Computed as det(X - M_pi), i.e. the resultant of T^p - T - f with X - pi(T).
    """
    tower = pi.tower
    if tower.ell != 1:
        raise NotMonogenicCertified("elimination is implemented for single extensions only")
    p = tower.p
    pres = tower.pres
    cols = []
    cur = pi.data
    for _ in range(p):
        cols.append(cur)
        cur = pres.mul_t(cur, 1)
    one = LaurentSeries.one(tower.params)
    matrix = []
    for i in range(p):
        row = []
        for j in range(p):
            m = cols[j][i] if cols[j] is not None else None
            entry = [-m] if m is not None else None
            if i == j:
                entry = [entry[0] if entry else None, one]
            row.append(entry)
        matrix.append(row)
    poly = determinant(matrix, _poly_ops(tower.params))
    poly = list(poly) + [None] * (p + 1 - len(poly))
    coeffs = [c if c is not None else LaurentSeries.zero(tower.params) for c in poly]
    if len(coeffs) != p + 1 or coeffs[p] != one:
        raise NotMonogenicCertified("elimination did not produce a monic polynomial of degree p")
    return coeffs


def different_via_derivative(tower: ASTower) -> int:
    """v_S(m'(pi)) for the minimal polynomial m of a uniformizer pi (l = 1)."""
    if tower.ell != 1:
        raise PreconditionFailed("the derivative route needs a single extension (l = 1)")
    pi = uniformizer(tower)
    m = minimal_polynomial(pi)
    # m(pi) = 0 on the known window
    acc = tower.zero()
    for c in reversed(m):
        acc = acc * pi + tower.const(c)
    if not acc.is_known_zero():
        raise NotMonogenicCertified("pi is not a root of its elimination polynomial")
    deriv = [c.scale(tower.params.scalar(k)) for k, c in enumerate(m)][1:]
    acc = tower.zero()
    for c in reversed(deriv):
        acc = acc * pi + tower.const(c)
    return norm_valuation(acc)
