"""Truncated Laurent series over F_q: the field K = F_q((x)).

A series is either *exact* (a Laurent polynomial, all unstored higher terms
are zero) or carries an absolute precision ``prec``: the first exponent whose
coefficient is unknown.  Results are always normalized, so ``lead`` is the
valuation of any series with a stored nonzero coefficient.
"""

from __future__ import annotations

import contextlib
import contextvars
import math
import re
from typing import Iterator, Sequence

from .errors import DivisionByZero, ParseError, PrecisionExhausted
from .ffield import GF, field

__all__ = [
    "INF",
    "LaurentSeries",
    "default_window",
    "set_default_window",
    "precision_window",
    "ls_arith",
    "ls_valuation",
    "ls_frobenius",
    "ls_substitute_power",
    "parse_series",
]

INF = math.inf

_WINDOW: contextvars.ContextVar[int] = contextvars.ContextVar("wildram_window", default=64)

_KRONECKER_MIN = 12


def default_window() -> int:
    """Coefficients past the lead kept by inexact operations."""
    return _WINDOW.get()


def set_default_window(n: int) -> None:
    if n < 1:
        raise ValueError("precision window must be positive")
    _WINDOW.set(n)


@contextlib.contextmanager
def precision_window(n: int) -> Iterator[None]:
    if n < 1:
        raise ValueError("precision window must be positive")
    token = _WINDOW.set(n)
    try:
        yield
    finally:
        _WINDOW.reset(token)


# ---------------------------------------------------------------------------
# coefficient convolution


def _pack(vals, nbytes):
    return int.from_bytes(b"".join(v.to_bytes(nbytes, "little") for v in vals), "little")


def _unpack(n, count, nbytes):
    bs = n.to_bytes(count * nbytes, "little")
    return [int.from_bytes(bs[i * nbytes:(i + 1) * nbytes], "little") for i in range(count)]


def _conv(F: GF, a: Sequence[int], b: Sequence[int]) -> list:
    """Full product of two coefficient lists over F."""
    n, m = len(a), len(b)
    if n == 0 or m == 0:
        return []
    p, e = F.p, F.e
    if e == 1:
        if min(n, m) < _KRONECKER_MIN:
            r = [0] * (n + m - 1)
            for i, x in enumerate(a):
                if x:
                    for j, y in enumerate(b):
                        r[i + j] += x * y
            return [v % p for v in r]
        nbytes = ((min(n, m) * (p - 1) ** 2).bit_length() + 8) // 8
        prod = _pack(a, nbytes) * _pack(b, nbytes)
        return [v % p for v in _unpack(prod, n + m - 1, nbytes)]
    if min(n, m) < _KRONECKER_MIN:
        r = [0] * (n + m - 1)
        mul, add = F.mul, F.add
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        r[i + j] = add(r[i + j], mul(x, y))
        return r
    # bivariate Kronecker: slot (i, d) holds the w^d digit of coefficient i
    width = 2 * e - 1
    nbytes = ((min(n, m) * e * (p - 1) ** 2).bit_length() + 8) // 8
    dig = F._digits

    def spread(seq):
        out = []
        pad = (0,) * (e - 1)
        for c in seq:
            out.extend(dig[c])
            out.extend(pad)
        return out

    prod = _pack(spread(a), nbytes) * _pack(spread(b), nbytes)
    flat = _unpack(prod, (n + m - 1) * width, nbytes)
    out = []
    for i in range(n + m - 1):
        chunk = flat[i * width:(i + 1) * width]
        out.append(F.from_digits(F._reduce_poly(chunk)))
    return out


def _series_inverse(F: GF, u: Sequence[int], n: int) -> list:
    """First n coefficients of 1/u for a power series u with u[0] != 0."""
    b0 = F.inv(u[0])
    out = [b0]
    if F.e == 1:
        p = F.p
        nb0 = (-b0) % p
        for k in range(1, n):
            s = 0
            for i in range(1, min(k, len(u) - 1) + 1):
                ui = u[i]
                if ui:
                    s += ui * out[k - i]
            out.append(s * nb0 % p)
        return out
    nb0 = F.neg(b0)
    mul, add = F.mul, F.add
    for k in range(1, n):
        s = 0
        for i in range(1, min(k, len(u) - 1) + 1):
            ui = u[i]
            if ui:
                s = add(s, mul(ui, out[k - i]))
        out.append(mul(s, nb0))
    return out


# ---------------------------------------------------------------------------


class LaurentSeries:
    """Element of F_q((x)) known up to ``O(x^prec)`` (or exactly).

    Attributes: ``field``, ``lead``, ``coeffs`` (tuple of ints), ``exact``,
    ``prec`` (``INF`` when exact).
    """

    __slots__ = ("field", "lead", "coeffs", "exact", "prec")

    def __init__(self, F: GF, lead: int, coeffs: Sequence[int], exact: bool = True, prec=INF):
        coeffs = list(coeffs)
        if exact:
            prec = INF
        else:
            if prec == INF:
                raise ValueError("inexact series needs a finite precision")
            prec = int(prec)
            keep = prec - lead
            if keep < len(coeffs):
                coeffs = coeffs[:max(keep, 0)]
        k = 0
        while k < len(coeffs) and coeffs[k] == 0:
            k += 1
        if k:
            coeffs = coeffs[k:]
            lead += k
        while coeffs and coeffs[-1] == 0:
            coeffs.pop()
        if not coeffs:
            lead = 0 if exact else prec
        self.field = F
        self.lead = lead
        self.coeffs = tuple(coeffs)
        self.exact = exact
        self.prec = prec

    # -- constructors ---------------------------------------------------

    @classmethod
    def zero(cls, F: GF) -> "LaurentSeries":
        return cls(F, 0, ())

    @classmethod
    def one(cls, F: GF) -> "LaurentSeries":
        return cls(F, 0, (1,))

    @classmethod
    def monomial(cls, F: GF, c: int, k: int) -> "LaurentSeries":
        return cls(F, k, (c,))

    @classmethod
    def x(cls, F: GF) -> "LaurentSeries":
        return cls(F, 1, (1,))

    @classmethod
    def from_dict(cls, F: GF, terms: dict, prec=None) -> "LaurentSeries":
        if not terms:
            if prec is None:
                return cls.zero(F)
            return cls(F, prec, (), exact=False, prec=prec)
        lo, hi = min(terms), max(terms)
        if prec is not None:
            hi = max(hi, prec - 1)
        c = [0] * (hi - lo + 1)
        for k, v in terms.items():
            c[k - lo] = F.add(c[k - lo], v)
        if prec is None:
            return cls(F, lo, c)
        return cls(F, lo, c, exact=False, prec=prec)

    # -- inspection -----------------------------------------------------

    def is_zero(self) -> bool:
        """True only for the exact zero series."""
        return self.exact and not self.coeffs

    def is_known_nonzero(self) -> bool:
        return bool(self.coeffs)

    def valuation(self):
        if self.coeffs:
            return self.lead
        if self.exact:
            return INF
        raise PrecisionExhausted(
            f"valuation undecidable: series is O(x^{self.prec})",
            window=default_window(),
            suggested=2 * default_window(),
        )

    def valuation_bound(self):
        """The valuation when decidable, otherwise the lower bound ``prec``."""
        if self.coeffs or self.exact:
            return self.lead if self.coeffs else INF
        return self.prec

    def leading_coefficient(self) -> int:
        if not self.coeffs:
            self.valuation()
            raise DivisionByZero("zero series has no leading coefficient")
        return self.coeffs[0]

    def coefficient(self, k: int) -> int:
        if not self.exact and k >= self.prec:
            raise PrecisionExhausted(f"coefficient of x^{k} beyond precision O(x^{self.prec})")
        i = k - self.lead
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def terms(self) -> dict:
        return {self.lead + i: c for i, c in enumerate(self.coeffs) if c}

    @property
    def degree(self):
        """Largest stored exponent (``-INF`` for zero)."""
        return self.lead + len(self.coeffs) - 1 if self.coeffs else -INF

    def _check(self, other):
        if not isinstance(other, LaurentSeries):
            raise TypeError(f"expected LaurentSeries, got {type(other).__name__}")
        if other.field is not self.field:
            raise ValueError(f"field mismatch: {self.field} vs {other.field}")

    # -- ring operations ------------------------------------------------

    def _const(self, c: int) -> "LaurentSeries":
        F = self.field
        return LaurentSeries(F, 0, (c % F.p if F.e == 1 else c,))

    def __add__(self, other):
        if isinstance(other, int):
            other = self._const(other)
        self._check(other)
        return self._addsub(other, False)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = self._const(other)
        self._check(other)
        return self._addsub(other, True)

    def _addsub(self, other, negate):
        F = self.field
        if not other.coeffs and other.exact:
            return self
        if not self.coeffs and self.exact:
            return -other if negate else other
        exact = self.exact and other.exact
        prec = min(self.prec, other.prec)
        lo = min(self.lead, other.lead)
        hi = max(self.lead + len(self.coeffs), other.lead + len(other.coeffs))
        if not exact:
            hi = min(hi, prec)
            if hi <= lo:
                return LaurentSeries(F, prec, (), exact=False, prec=prec)
        out = [0] * (hi - lo)
        for i, c in enumerate(self.coeffs):
            k = self.lead + i - lo
            if k >= len(out):
                break
            out[k] = c
        add = F.add
        if negate:
            neg = F.neg
            for i, c in enumerate(other.coeffs):
                k = other.lead + i - lo
                if k >= len(out):
                    break
                if c:
                    out[k] = add(out[k], neg(c))
        else:
            for i, c in enumerate(other.coeffs):
                k = other.lead + i - lo
                if k >= len(out):
                    break
                if c:
                    out[k] = add(out[k], c)
        return LaurentSeries(F, lo, out, exact=exact, prec=prec)

    def __neg__(self):
        neg = self.field.neg
        return LaurentSeries(self.field, self.lead, [neg(c) for c in self.coeffs], self.exact, self.prec)

    def scale(self, c: int) -> "LaurentSeries":
        """Multiply by a constant of F_q."""
        F = self.field
        if c == 1:
            return self
        if c == 0:
            if self.exact:
                return LaurentSeries.zero(F)
            return LaurentSeries(F, self.prec, (), exact=False, prec=self.prec)
        mul = F.mul
        return LaurentSeries(F, self.lead, [mul(c, a) for a in self.coeffs], self.exact, self.prec)

    def shift(self, k: int) -> "LaurentSeries":
        """Multiply by x^k."""
        if k == 0 or (self.exact and not self.coeffs):
            return self
        return LaurentSeries(self.field, self.lead + k, self.coeffs, self.exact, self.prec + k)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        self._check(other)
        F = self.field
        if (self.exact and not self.coeffs) or (other.exact and not other.coeffs):
            return LaurentSeries.zero(F)
        va, vb = self.valuation_bound(), other.valuation_bound()
        exact = self.exact and other.exact
        prec = min(self.prec + vb, other.prec + va)
        if not self.coeffs or not other.coeffs:
            return LaurentSeries(F, prec, (), exact=False, prec=prec)
        a, b = self.coeffs, other.coeffs
        lead = self.lead + other.lead
        if not exact:
            keep = prec - lead
            if keep <= 0:
                return LaurentSeries(F, prec, (), exact=False, prec=prec)
            a, b = a[:keep], b[:keep]
        return LaurentSeries(F, lead, _conv(F, a, b), exact=exact, prec=prec)

    __rmul__ = __mul__

    def inverse(self) -> "LaurentSeries":
        F = self.field
        if not self.coeffs:
            if self.exact:
                raise DivisionByZero("inverse of the zero series")
            self.valuation()
        v = self.lead
        if self.exact and len(self.coeffs) == 1:
            return LaurentSeries(F, -v, (F.inv(self.coeffs[0]),))
        window = default_window()
        rel = window if self.exact else min(window, self.prec - v)
        inv = _series_inverse(F, self.coeffs, rel)
        return LaurentSeries(F, -v, inv, exact=False, prec=-v + rel)

    def __truediv__(self, other):
        if isinstance(other, int):
            return self.scale(self.field.inv(other))
        self._check(other)
        return self * other.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = LaurentSeries.one(self.field)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def frobenius(self) -> "LaurentSeries":
        """a^p, coefficientwise Frobenius with exponents scaled by p."""
        F = self.field
        p = F.p
        out = [0] * (p * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        fr = F._frob
        for i, c in enumerate(self.coeffs):
            out[p * i] = fr[c]
        prec = INF if self.exact else p * self.prec
        return LaurentSeries(F, p * self.lead, out, self.exact, prec)

    def substitute_power(self, n: int) -> "LaurentSeries":
        """a(x^n), as a series in the new variable."""
        if n < 1:
            raise ValueError("substitution exponent must be positive")
        out = [0] * (n * (len(self.coeffs) - 1) + 1) if self.coeffs else []
        for i, c in enumerate(self.coeffs):
            out[n * i] = c
        prec = INF if self.exact else n * self.prec
        lead = n * self.lead if self.coeffs else (prec if not self.exact else 0)
        return LaurentSeries(self.field, lead, out, self.exact, prec)

    def truncate(self, prec: int) -> "LaurentSeries":
        """Forget everything from x^prec on."""
        return LaurentSeries(self.field, self.lead, self.coeffs, exact=False, prec=min(prec, self.prec))

    def part(self, lo=-INF, hi=INF) -> "LaurentSeries":
        """Terms with lo <= exponent < hi; inexact when the window reaches prec."""
        terms = {k: c for k, c in self.terms().items() if lo <= k < hi}
        if not self.exact and hi > self.prec:
            return LaurentSeries.from_dict(self.field, terms, prec=self.prec)
        return LaurentSeries.from_dict(self.field, terms)

    # -- comparison -----------------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return (self.field is other.field and self.exact == other.exact and self.prec == other.prec
                and self.lead == other.lead and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.lead, self.coeffs, self.exact, self.prec))

    def agrees(self, other: "LaurentSeries") -> bool:
        """Equal on the window where both are known."""
        d = self - other
        return not d.coeffs

    # -- text -----------------------------------------------------------

    def __str__(self):
        return format_series(self)

    def __repr__(self):
        return f"LaurentSeries({self.field!r}, {format_series(self)!r})"


# ---------------------------------------------------------------------------
# functional surface


def ls_arith(op: str, a: LaurentSeries, b: LaurentSeries) -> LaurentSeries:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def ls_valuation(a: LaurentSeries):
    return a.valuation()


def ls_frobenius(a: LaurentSeries) -> LaurentSeries:
    return a.frobenius()


def ls_substitute_power(a: LaurentSeries, n: int) -> LaurentSeries:
    return a.substitute_power(n)


# ---------------------------------------------------------------------------
# text syntax:  x^-3 + 2*x^-1 + w*x^2 + [1,1]*x^5 + O(x^9)

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z]+)|(?P<op>[-+*^(),\[\]]))")


def _tokenize(text: str) -> list:
    out, pos = [], 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at offset {pos}")
        pos = m.end()
        if m.group("int") is not None:
            out.append(("int", int(m.group("int"))))
        elif m.group("name") is not None:
            out.append(("name", m.group("name")))
        else:
            out.append(("op", m.group("op")))
    return out


class _Parser:
    def __init__(self, text: str, F: GF, var: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.F = F
        self.var = var

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        t = self.peek()
        if t[0] is None or (kind and t[0] != kind) or (value is not None and t[1] != value):
            want = value if value is not None else kind
            raise ParseError(f"expected {want!r}, found {t[1]!r}")
        self.i += 1
        return t

    def signed_int(self):
        neg = False
        if self.peek() == ("op", "("):
            self.take()
            v = self.signed_int()
            self.take("op", ")")
            return v
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            neg ^= self.take()[1] == "-"
        v = self.take("int")[1]
        return -v if neg else v

    def parse(self):
        F = self.F
        terms: dict = {}
        prec = None
        sign = 1
        first = True
        while True:
            t = self.peek()
            if t[0] is None:
                if first:
                    raise ParseError("empty series")
                break
            if not first or (t[0] == "op" and t[1] in "+-"):
                if t[0] != "op" or t[1] not in "+-":
                    raise ParseError(f"expected '+' or '-', found {t[1]!r}")
                sign = 1
                while self.peek()[0] == "op" and self.peek()[1] in "+-":
                    if self.take()[1] == "-":
                        sign = -sign
            first = False
            if self.peek() == ("name", "O"):
                self.take()
                self.take("op", "(")
                k = self.xpower()
                self.take("op", ")")
                prec = k if prec is None else min(prec, k)
                continue
            c, k = self.term()
            if sign < 0:
                c = F.neg(c)
            terms[k] = F.add(terms.get(k, 0), c)
        if prec is not None:
            terms = {k: v for k, v in terms.items() if k < prec}
            return LaurentSeries.from_dict(F, terms, prec=prec)
        return LaurentSeries.from_dict(F, terms)

    def xpower(self):
        self.take("name", self.var)
        if self.peek() == ("op", "^"):
            self.take()
            return self.signed_int()
        return 1

    def term(self):
        F = self.F
        c = 1
        k = 0
        seen_x = False
        while True:
            t = self.peek()
            if t == ("name", self.var):
                if seen_x:
                    k += self.xpower()
                else:
                    k = self.xpower()
                seen_x = True
            elif t[0] == "int" or t == ("name", "w") or t == ("op", "[") or t == ("op", "("):
                c = F.mul(c, self.factor())
            else:
                raise ParseError(f"unexpected token {t[1]!r} in term")
            if self.peek() == ("op", "*"):
                self.take()
                continue
            return c, k

    def factor(self):
        F = self.F
        t = self.peek()
        if t[0] == "int":
            self.take()
            v = t[1]
            if v >= F.p:
                raise ParseError(f"coefficient {v} is not a residue mod {F.p}")
            return v
        if t == ("name", "w"):
            self.take()
            if F.e == 1:
                raise ParseError("'w' denotes the generator of F_q and needs e > 1")
            n = 1
            if self.peek() == ("op", "^"):
                self.take()
                n = self.signed_int()
            return F.pow(F.generator, n)
        if t == ("op", "["):
            self.take()
            digits = [self.take("int")[1]]
            while self.peek() == ("op", ","):
                self.take()
                digits.append(self.take("int")[1])
            self.take("op", "]")
            try:
                return F.deserialize(digits)
            except ValueError as exc:
                raise ParseError(str(exc)) from None
        if t == ("op", "("):
            self.take()
            s = _Parser.__new__(_Parser)
            # constant subexpression: reuse the series grammar with no variable
            depth, j = 1, self.i
            while j < len(self.toks) and depth:
                if self.toks[j] == ("op", "("):
                    depth += 1
                elif self.toks[j] == ("op", ")"):
                    depth -= 1
                j += 1
            if depth:
                raise ParseError("unbalanced parenthesis")
            s.toks, s.i, s.F, s.var = self.toks[self.i:j - 1], 0, F, self.var
            inner = s.parse()
            self.i = j
            if not inner.exact or any(k != 0 for k in inner.terms()):
                raise ParseError("parenthesized factor must be a constant")
            return inner.coefficient(0)
        raise ParseError(f"unexpected token {t[1]!r}")


def parse_series(text: str, F: GF | None = None, *, p: int | None = None, e: int = 1,
                 var: str = "x") -> LaurentSeries:
    """Parse a series literal such as ``"x^-3 + 2*x^-1 + x^2"``.

    Coefficients are integers in ``[0, p)``, powers of the generator ``w``, or
    digit lists ``[c0,c1,...]``.  ``O(x^k)`` marks an inexact series.
    """
    if F is None:
        if p is None:
            raise ValueError("need a field or a characteristic")
        F = field(p, e)
    return _Parser(text, F, var).parse()


def format_series(a: LaurentSeries, var: str = "x") -> str:
    F = a.field
    parts = []
    for k, c in sorted(a.terms().items()):
        if k == 0:
            mono = ""
        elif k == 1:
            mono = var
        else:
            mono = f"{var}^{k}"
        if not mono:
            parts.append(F.format(c))
        elif c == 1:
            parts.append(mono)
        else:
            parts.append(f"{F.format(c)}*{mono}")
    if not a.exact:
        parts.append(f"O({var}^{a.prec})")
    return " + ".join(parts) if parts else "0"
