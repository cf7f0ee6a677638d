"""Artin-Schreier normal forms over K = F_q((x)).

``reduce_rhs`` moves f (defining y^p - y = f) within its class modulo
the Artin-Schreier operator z -> z^p - z until either the pole order is prime
to p (a ramified extension with that break) or f is a constant, which is
split or inert according to whether t^p - t = c is solvable in F_q.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence, Union

from . import fpspace
from .errors import InvalidTower, PrecisionExhausted
from .laurent import LaurentSeries, default_window, format_series

RAMIFIED = "ramified"
SPLIT = "split"
INERT = "inert"


def wp(s: LaurentSeries) -> LaurentSeries:
    """The Artin-Schreier operator s^p - s."""
    return s.frobenius() - s


@dataclass(frozen=True)
class ReducedRHS:
    """Result of ``reduce_rhs``.

    ``original == f + wp(witness)`` holds on the known window.
    """

    original: LaurentSeries
    f: LaurentSeries
    status: str
    witness: LaurentSeries
    conductor: int | None = None

    @property
    def is_ramified(self) -> bool:
        return self.status == RAMIFIED

    @property
    def break_(self) -> Union[int, str]:
        return self.conductor if self.status == RAMIFIED else self.status

    def identity_residual(self) -> LaurentSeries:
        return self.original - self.f - wp(self.witness)

    def identity_holds(self) -> bool:
        return not self.identity_residual().is_known_nonzero()

    def to_json(self) -> dict:
        return {
            "original": format_series(self.original),
            "reduced": format_series(self.f),
            "status": self.status,
            "break": self.conductor,
            "witness": format_series(self.witness),
        }


def _geometric_frobenius_sum(t: LaurentSeries) -> LaurentSeries:
    """g = t + t^p + t^(p^2) + ... for v(t) >= 1, so that g^p - g = -t."""
    v = t.valuation()
    if v < 1:
        raise ValueError("tail must have positive valuation")
    prec = v + default_window()
    g = LaurentSeries.zero(t.field)
    term = t
    while term.valuation_bound() < prec:
        g = g + term
        term = term.frobenius()
    return g.truncate(prec)


def reduce_rhs(f: LaurentSeries) -> ReducedRHS:
    F = f.field
    p = F.p
    original = f
    witness = LaurentSeries.zero(F)

    # (a) kill leading poles of order divisible by p
    while True:
        v = f.valuation_bound()
        if not f.coeffs or v >= 0 or v % p:
            break
        c0 = f.leading_coefficient()
        c = F.pth_root(c0)
        s = LaurentSeries.monomial(F, c, v // p)
        f = f - wp(s)
        witness = witness + s

    # (b) strip the positive-valuation tail
    if not f.exact and f.prec < 1:
        raise PrecisionExhausted(
            f"constant term of {format_series(f)} is beyond the known window",
            window=default_window(), suggested=default_window() + 1 - f.prec)
    tail = f.part(lo=1)
    f = f.part(hi=1)
    if tail.is_known_nonzero():
        witness = witness - _geometric_frobenius_sum(tail)
    elif not tail.exact:
        witness = witness.truncate(tail.prec)

    # (c) the constant term
    c0 = f.coefficient(0)
    root = F.solve_as_constant(c0)
    polar = f.part(hi=0)
    if polar.is_known_nonzero():
        if c0 and root is not None:
            f = f - LaurentSeries.monomial(F, c0, 0)
            witness = witness + LaurentSeries.monomial(F, root, 0)
        return ReducedRHS(original, f, RAMIFIED, witness, -polar.valuation())
    if root is None:
        return ReducedRHS(original, f, INERT, witness)
    if c0:
        f = LaurentSeries.zero(F)
        witness = witness + LaurentSeries.monomial(F, root, 0)
    return ReducedRHS(original, f, SPLIT, witness)


def break_of(f: LaurentSeries) -> Union[int, str]:
    """The break m of a ramified class, else ``"split"`` or ``"inert"``."""
    return reduce_rhs(f).break_


def combine(rhs_list: Sequence[LaurentSeries], coeffs: Sequence[int]) -> LaurentSeries:
    """sum c_i f_i with c_i in F_p."""
    F = rhs_list[0].field
    out = LaurentSeries.zero(F)
    for c, f in zip(coeffs, rhs_list):
        c %= F.p
        if c:
            out = out + f.scale(c)
    return out


@dataclass
class TowerValidation:
    """Line-by-line reduction of the F_p-span of a list of right-hand sides."""

    p: int
    ell: int
    ok: bool
    lines: dict = dc_field(default_factory=dict)
    failures: list = dc_field(default_factory=list)
    reduced: dict = dc_field(default_factory=dict, repr=False)

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "lines": [{"coeffs": list(c), "break": m} for c, m in sorted(self.lines.items())],
            "failures": [{"coeffs": list(c), "status": s} for c, s in self.failures],
        }

    def breaks(self) -> list:
        return sorted(set(self.lines.values()))


def validate_tower(rhs_list: Sequence[LaurentSeries]) -> TowerValidation:
    """Reduce every nonzero F_p-combination; ok iff all are ramified.

    An F_p-combination that is split means the generators are dependent
    modulo wp(K); an inert one means the compositum has residue growth.
    Either way S/K is not a totally ramified field extension of degree p^l.
    """
    ell = len(rhs_list)
    if ell == 0:
        return TowerValidation(p=0, ell=0, ok=True)
    F = rhs_list[0].field
    if any(f.field is not F for f in rhs_list):
        raise ValueError("right-hand sides over different fields")
    p = F.p
    val = TowerValidation(p=p, ell=ell, ok=True)
    for line in fpspace.lines(p, ell):
        rr = reduce_rhs(combine(rhs_list, line))
        val.reduced[line] = rr
        if rr.is_ramified:
            val.lines[line] = rr.conductor
        else:
            val.ok = False
            val.failures.append((line, rr.status))
    return val


def line_breaks(rhs_list: Sequence[LaurentSeries], check_multiples: bool = True) -> dict:
    """Map each line of F_p^l (normalized representative) to its break."""
    val = validate_tower(rhs_list)
    if not val.ok:
        raise InvalidTower("tower does not define a totally ramified extension", val)
    if check_multiples:
        F = rhs_list[0].field
        for line, m in val.lines.items():
            for lam in range(2, F.p):
                mult = tuple(lam * c % F.p for c in line)
                if break_of(combine(rhs_list, mult)) != m:
                    raise AssertionError(f"scalar multiple {mult} of {line} has a different break")
    return dict(val.lines)
