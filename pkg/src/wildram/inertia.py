"""Subgroup and subfield calculus for elementary abelian wild towers.

Subgroups of G = F_p^l and subfields of S correspond through the dot
pairing: the subgroup H fixes exactly the generators sum_i w_i T_i with
w in Ann(H).  Every correspondence statement below is therefore a rank
computation, cross-checked against the filtration oracle of ``tower``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Sequence

from . import fpspace
from .asred import validate_tower
from .errors import (NegativeGenus, NonIntegralGenus, NotTotallyRamified,
                     PreconditionFailed)
from .fpspace import Subspace
from .tower import (ASTower, RamificationFiltration, different_hilbert,
                    galois_apply, ramification_filtration)

# ---------------------------------------------------------------------------
# G_2 and the jump at two


def break_span(tower: ASTower, m: int) -> Subspace:
    """Span of the lines of F_p^l whose break is exactly m."""
    p, ell = tower.p, tower.ell
    return Subspace(p, ell, [c for c, b in tower.line_breaks.items() if b == m])


def g2_characterize(tower: ASTower) -> Subspace:
    """G_2 as the annihilator of the span of the break-1 lines."""
    return break_span(tower, 1).annihilator()


def jump_at_two(tower: ASTower) -> bool:
    """Whether G_2 != G, i.e. whether some line has break 1."""
    return any(b == 1 for b in tower.line_breaks.values())


def gi_containment_bound(tower: ASTower, i: int,
                         filt: RamificationFiltration | None = None) -> Subspace:
    """Ann(span of break-i lines); contained in G_(i+1) when G = G_i."""
    if i < 1:
        raise PreconditionFailed(f"index i={i} must be at least 1")
    filt = filt if filt is not None else ramification_filtration(tower)
    if filt.G(i) != tower.group():
        raise PreconditionFailed(f"G_{i} != G for this tower")
    return break_span(tower, i).annihilator()


# ---------------------------------------------------------------------------
# fixed fields and re-presentation


def fixed_field_tower(tower: ASTower, H: Subspace) -> ASTower:
    """The tower of S^H: generators sum_i w_i T_i for w in an RREF basis of Ann(H)."""
    W = H.annihilator()
    return tower.recombine([list(w) for w in W.basis])


def quotient_map(H: Subspace) -> list:
    """Rows of G -> G/H in the coordinates of ``fixed_field_tower``."""
    return [list(w) for w in H.annihilator().basis]


@dataclass
class RelativePresentation:
    """S re-presented so that its first generators generate S^H.

    ``matrix`` rows give the new generators; group coordinates transform by
    c -> matrix . c and back by ``inverse``.
    """

    tower: ASTower
    matrix: list
    inverse: list
    subgroup: Subspace
    fixed_dim: int


def relative_presentation(tower: ASTower, H: Subspace) -> RelativePresentation:
    W = H.annihilator()
    rows = [list(w) for w in W.basis] + [list(v) for v in fpspace.complement_basis(W)]
    inv = fpspace.invert_matrix(rows, tower.p) if rows else []
    new = tower.recombine(rows)
    return RelativePresentation(new, rows, inv, H.image(rows, tower.ell), W.dim)


def _map_filtration(filt: RamificationFiltration, matrix, group: Subspace) -> RamificationFiltration:
    p = group.p
    groups = [g.image(matrix, group.n) for g in filt.groups]
    jumps = {fpspace.mat_vec(matrix, c, p): j for c, j in filt.jumps.items()}
    return RamificationFiltration(group, groups, jumps)


def relative_filtration(tower: ASTower, H: Subspace) -> RamificationFiltration:
    """Filtration of S/S^H from the re-presented tower, in original coordinates.

    Uses the frame valuation on the re-presented tower, so it shares no
    intermediate data with the intersection route.
    """
    rel = relative_presentation(tower, H)
    if H.is_zero():
        return RamificationFiltration(H, [H], {})
    filt = ramification_filtration(rel.tower, method="frame", subgroup=rel.subgroup)
    return _map_filtration(filt, rel.inverse, H)


# ---------------------------------------------------------------------------
# restriction, quotient, transitivity


def restrict_filtration(tower: ASTower, H: Subspace, method: str = "intersect",
                        filt: RamificationFiltration | None = None) -> RamificationFiltration:
    """H_i = G_i & H.

    ``method="intersect"`` intersects the oracle chain of G with H;
    ``method="relative"`` runs the oracle on S over S^H directly.
    """
    if method == "relative":
        return relative_filtration(tower, H)
    if method != "intersect":
        raise ValueError(f"unknown method {method!r}")
    filt = filt if filt is not None else ramification_filtration(tower)
    groups = [g & H for g in filt.groups]
    jumps = {c: j for c, j in filt.jumps.items() if c in H}
    return RamificationFiltration(H, groups, jumps)


def quotient_filtration(tower: ASTower, j: int, method: str = "law",
                        filt: RamificationFiltration | None = None) -> RamificationFiltration:
    """Filtration of G/H for H = G_j.

    ``method="law"`` returns G_i/H for i <= j and the trivial group after;
    ``method="oracle"`` runs the oracle on the tower of S^H.  Both are
    expressed on G/H identified with F_p^(dim Ann H) by ``quotient_map``.
    """
    if not isinstance(j, int) or j < 0:
        raise PreconditionFailed(f"{j!r} is not a chain index")
    filt = filt if filt is not None else ramification_filtration(tower)
    H = filt.G(j)
    rows = quotient_map(H)
    k = len(rows)
    Q = Subspace.full(tower.p, k)
    if method == "oracle":
        qt = fixed_field_tower(tower, H)
        return ramification_filtration(qt)
    if method != "law":
        raise ValueError(f"unknown method {method!r}")
    groups = [filt.G(i).image(rows, k) for i in range(j)]
    groups.append(Subspace.zero(tower.p, k))
    return RamificationFiltration(Q, groups, {})


def transitivity_check(tower: ASTower, H: Subspace,
                       filt: RamificationFiltration | None = None) -> tuple:
    """(d_{S/K}, |H| d_{S^H/K} + d_{S/S^H}) from independent oracle runs."""
    filt = filt if filt is not None else ramification_filtration(tower)
    lhs = different_hilbert(filt)
    lower = ramification_filtration(fixed_field_tower(tower, H))
    upper = restrict_filtration(tower, H, filt=filt)
    rhs = H.order * different_hilbert(lower) + different_hilbert(upper)
    return lhs, rhs


# ---------------------------------------------------------------------------
# compositum and killing wild inertia


@dataclass
class LocalCoverPair:
    """Local data of two covers at points over the same branch point."""

    towerX: ASTower
    towerZ: ASTower
    relation: str = "general"

    def __post_init__(self):
        if self.towerX.params is not self.towerZ.params:
            raise ValueError("the two towers live over different fields")


@dataclass
class CompositumResult:
    tower: ASTower
    span_collapse: bool
    dim: int
    dims: tuple

    def to_json(self) -> dict:
        return {"tower": self.tower.to_json(), "span_collapse": self.span_collapse,
                "dim": self.dim, "dims": list(self.dims)}


def compositum(pair: LocalCoverPair) -> CompositumResult:
    """The tower of the compositum: a basis of the joint F_p-span modulo wp(K).

    Right-hand sides are added greedily (X first); one that is dependent on
    those already chosen is dropped and sets ``span_collapse``.
    """
    X, Z = pair.towerX, pair.towerZ
    basis: list = []
    for f in list(X.fs) + list(Z.fs):
        trial = validate_tower(basis + [f])
        if trial.ok:
            basis.append(f)
            continue
        if not any(status == "split" for _, status in trial.failures):
            raise NotTotallyRamified("the compositum has a residue field extension")
    tame = X.tame_index * Z.tame_index // math.gcd(X.tame_index, Z.tame_index)
    tower = ASTower(X.params, basis, tame)
    return CompositumResult(tower, len(basis) < X.ell + Z.ell, len(basis), (X.ell, Z.ell))


@dataclass
class KillWildResult:
    towerZ: ASTower
    relative_inertia: Subspace
    relative_filtration: RamificationFiltration
    fixing_group: Subspace = dc_field(default=None)

    @property
    def relative_different(self) -> int:
        return different_hilbert(self.relative_filtration)

    def to_json(self) -> dict:
        return {
            "towerZ": self.towerZ.to_json(),
            "relative_inertia": self.relative_inertia.to_json(),
            "relative_filtration": self.relative_filtration.to_json(),
            "relative_different": self.relative_different,
        }


def fixing_subgroup(tower: ASTower, rows: Sequence[Sequence[int]]) -> Subspace:
    """{c : sigma_c fixes sum_i r_i T_i for every row r}, computed in S."""
    gens = [sum((tower.gen(i + 1).scale(c) for i, c in enumerate(r) if c % tower.p),
                tower.zero()) for r in rows]
    members = [c for c in tower.group_elements()
               if all(galois_apply(c, g) == g for g in gens)]
    return Subspace(tower.p, tower.ell, members)


def kill_wild(tower: ASTower, N: Subspace) -> KillWildResult:
    """The intermediate cover Z with S^N = top field of Z; S/Z has inertia N."""
    towerZ = fixed_field_tower(tower, N)
    rows = quotient_map(N)
    fixing = fixing_subgroup(tower, rows)
    return KillWildResult(towerZ, N, relative_filtration(tower, N), fixing)


# ---------------------------------------------------------------------------
# tame pullback and genus


def tame_pullback(tower: ASTower, n: int) -> ASTower:
    """Pull back along x = y^n (n prime to p): f(x) -> f(y^n), re-reduced."""
    if n < 1 or math.gcd(n, tower.p) != 1:
        raise PreconditionFailed(f"n={n} must be positive and prime to p={tower.p}")
    rhs = [f.substitute_power(n) for f in tower.fs]
    return ASTower(tower.params, rhs, tower.tame_index // math.gcd(tower.tame_index, n))


def rh_genus(degree: int, branch_differents: Sequence[int]) -> int:
    """g from 2g - 2 = -2 degree + sum of local differents (cover of P^1)."""
    if degree < 1:
        raise PreconditionFailed("degree must be at least 1")
    if any(d < 0 for d in branch_differents):
        raise PreconditionFailed("differents must be non-negative")
    g = Fraction(sum(branch_differents) - 2 * degree + 2, 2)
    if g.denominator != 1:
        raise NonIntegralGenus(f"2g - 2 = {2 * g - 2} gives a non-integral genus {g}")
    if g < 0:
        raise NegativeGenus(f"negative genus {g}")
    return int(g)
