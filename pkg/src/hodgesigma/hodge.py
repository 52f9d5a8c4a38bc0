"""Filtrations, mixed Hodge structures and the Deligne splitting.

Filtrations are stored sparsely as sorted ``(index, subspace)`` steps. A weight
filtration is increasing: ``W_n`` is the step with the largest index ``<= n``
and the zero space below the first step. A Hodge filtration is decreasing:
``F^p`` is the step with the smallest index ``>= p`` and the zero space above
the last step.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping

from .errors import DimensionMismatch, NotDirectSum, NotReal, NotRealWeight, NotValidated, InvalidMHS
from .gaussian import I, LatticeIndex
from .linalg import (
    Matrix,
    Subspace,
    conj_subspace,
    conj_vector,
    contains,
    intersect_subspaces,
    is_direct_sum,
    sum_all,
    sum_subspaces,
)


def _sorted_steps(ambient_dim: int, steps: Iterable[tuple[int, Subspace]]) -> tuple[tuple[int, Subspace], ...]:
    ordered = sorted(((int(n), s) for n, s in steps), key=lambda t: t[0])
    seen = set()
    for n, s in ordered:
        if n in seen:
            raise ValueError(f"duplicate filtration index {n}")
        seen.add(n)
        if s.ambient_dim != ambient_dim:
            raise DimensionMismatch(f"step {n} lives in dimension {s.ambient_dim}, expected {ambient_dim}")
    return tuple(ordered)


@dataclass(frozen=True)
class WeightFiltration:
    ambient_dim: int
    steps: tuple[tuple[int, Subspace], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", _sorted_steps(self.ambient_dim, self.steps))
        object.__setattr__(self, "_keys", [n for n, _ in self.steps])

    def __getitem__(self, n: int) -> Subspace:
        k = bisect.bisect_right(self._keys, n)
        if k == 0:
            return Subspace.zero(self.ambient_dim)
        return self.steps[k - 1][1]

    def jumps(self) -> list[int]:
        """Indices ``n`` with ``W_n != W_{n-1}``, ascending."""
        out = []
        prev = Subspace.zero(self.ambient_dim)
        for n, s in self.steps:
            if s != prev:
                out.append(n)
            prev = s
        return out

    def canonical(self) -> WeightFiltration:
        return WeightFiltration(self.ambient_dim, tuple((n, self[n]) for n in self.jumps()))

    def same_as(self, other: WeightFiltration) -> bool:
        return self.ambient_dim == other.ambient_dim and self.canonical().steps == other.canonical().steps


@dataclass(frozen=True)
class HodgeFiltration:
    ambient_dim: int
    steps: tuple[tuple[int, Subspace], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "steps", _sorted_steps(self.ambient_dim, self.steps))
        object.__setattr__(self, "_keys", [p for p, _ in self.steps])

    def __getitem__(self, p: int) -> Subspace:
        k = bisect.bisect_left(self._keys, p)
        if k == len(self.steps):
            return Subspace.zero(self.ambient_dim)
        return self.steps[k][1]

    def jumps(self) -> list[int]:
        """Indices ``p`` with ``F^p != F^{p+1}``, ascending."""
        out = []
        nxt = Subspace.zero(self.ambient_dim)
        for p, s in reversed(self.steps):
            if s != nxt:
                out.append(p)
            nxt = s
        return out[::-1]

    def canonical(self) -> HodgeFiltration:
        return HodgeFiltration(self.ambient_dim, tuple((p, self[p]) for p in self.jumps()))

    def same_as(self, other: HodgeFiltration) -> bool:
        return self.ambient_dim == other.ambient_dim and self.canonical().steps == other.canonical().steps


@dataclass
class ValidationReport:
    """Named boolean checks plus free-form notes; ``ok`` iff every check passed."""

    checks: dict[str, bool] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def record(self, name: str, passed: bool) -> bool:
        self.checks[name] = self.checks.get(name, True) and bool(passed)
        return passed

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [k for k, v in self.checks.items() if not v]

    def to_dict(self) -> dict:
        return {"ok": self.ok, "checks": dict(self.checks), "failures": self.failures(), "notes": list(self.notes)}


@dataclass(frozen=True)
class MixedHodgeStructure:
    weight: WeightFiltration
    hodge: HodgeFiltration
    validated: bool = False
    report: ValidationReport | None = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if self.weight.ambient_dim != self.hodge.ambient_dim:
            raise DimensionMismatch("weight and Hodge filtrations live in different dimensions")

    @property
    def ambient_dim(self) -> int:
        return self.weight.ambient_dim

    @classmethod
    def checked(cls, weight: WeightFiltration, hodge: HodgeFiltration) -> MixedHodgeStructure:
        """Validate and return a structure flagged as validated; raises :class:`InvalidMHS`."""
        report = validate_mhs(weight, hodge)
        if not report.ok:
            raise InvalidMHS(report)
        return cls(weight, hodge, validated=True, report=report)

    def canonical(self) -> MixedHodgeStructure:
        return MixedHodgeStructure(self.weight.canonical(), self.hodge.canonical(), self.validated, self.report)

    def same_as(self, other: MixedHodgeStructure) -> bool:
        return self.weight.same_as(other.weight) and self.hodge.same_as(other.hodge)


@dataclass(frozen=True)
class BiGrading:
    """A family of subspaces ``I^{p,q}``; zero pieces are dropped."""

    ambient_dim: int
    pieces: Mapping[LatticeIndex, Subspace] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        for (p, q), s in sorted(self.pieces.items()):
            if s.ambient_dim != self.ambient_dim:
                raise DimensionMismatch(f"piece ({p},{q}) lives in dimension {s.ambient_dim}")
            if not s.is_zero():
                clean[LatticeIndex(p, q)] = s
        object.__setattr__(self, "pieces", clean)

    def __getitem__(self, idx: tuple[int, int]) -> Subspace:
        return self.pieces.get(LatticeIndex(*idx), Subspace.zero(self.ambient_dim))

    def __eq__(self, other):
        if not isinstance(other, BiGrading):
            return NotImplemented
        return self.ambient_dim == other.ambient_dim and self.pieces == other.pieces

    def __hash__(self):
        return hash((self.ambient_dim, tuple(self.pieces.items())))

    def is_direct_sum(self) -> bool:
        return is_direct_sum(list(self.pieces.values()), self.ambient_dim)

    def weights(self) -> list[int]:
        return sorted({idx.weight for idx in self.pieces})

    def bifiltration(self, p: int, q: int) -> Subspace:
        """``D_{p,q}``: the sum of pieces ``I^{k,l}`` with ``k <= p`` and ``l <= q``."""
        return sum_all((s for (k, l), s in self.pieces.items() if k <= p and l <= q), self.ambient_dim)

    def weight_space(self, n: int) -> Subspace:
        return sum_all((s for idx, s in self.pieces.items() if idx.weight <= n), self.ambient_dim)

    def hodge_space(self, p: int) -> Subspace:
        return sum_all((s for idx, s in self.pieces.items() if idx.p >= p), self.ambient_dim)

    def conj(self) -> BiGrading:
        """The bigrading ``(p, q) -> conj(I^{q,p})``."""
        return BiGrading(self.ambient_dim, {LatticeIndex(q, p): conj_subspace(s) for (p, q), s in self.pieces.items()})

    def is_split(self) -> bool:
        return self.conj() == self


def _coordinate_range(values: Iterable[int]) -> range:
    vals = list(values)
    if not vals:
        return range(0)
    return range(min(vals), max(vals) + 1)


def validate_mhs(w: WeightFiltration, f: HodgeFiltration) -> ValidationReport:
    """Check that ``(w, f)`` is a real mixed Hodge structure.

    The purity of each graded piece ``Gr^W_n`` is tested in the ambient space:
    for every ``p`` the images of ``F^p`` and ``conj(F^{n+1-p})`` must be
    complementary modulo ``W_{n-1}``, i.e.

        (F^p ∩ W_n) + (conj F^{n+1-p} ∩ W_n) + W_{n-1} = W_n
        (F^p ∩ W_n) ∩ ((conj F^{n+1-p} ∩ W_n) + W_{n-1}) ⊆ W_{n-1}
    """
    if w.ambient_dim != f.ambient_dim:
        raise DimensionMismatch("weight and Hodge filtrations live in different dimensions")
    dim = w.ambient_dim
    report = ValidationReport()
    full = Subspace.full(dim)

    prev = Subspace.zero(dim)
    for n, s in w.steps:
        report.record("weight.increasing", contains(s, prev))
        report.record(f"weight.real[{n}]", conj_subspace(s) == s)
        prev = s
    report.record("weight.exhaustive", (w.steps[-1][1] if w.steps else Subspace.zero(dim)) == full)

    nxt = Subspace.zero(dim)
    for p, s in reversed(f.steps):
        report.record("hodge.decreasing", contains(s, nxt))
        nxt = s
    report.record("hodge.exhaustive", (f.steps[0][1] if f.steps else Subspace.zero(dim)) == full)
    if not report.ok:
        report.notes.append("filtration shape is invalid; purity of graded pieces not examined")
        return report

    hodge_idx = f.jumps()
    for n in w.jumps():
        wn, wprev = w[n], w[n - 1]
        if hodge_idx:
            lo = min(hodge_idx[0], n + 1 - (hodge_idx[-1] + 1))
            hi = max(hodge_idx[-1] + 1, n + 1 - hodge_idx[0])
        else:
            lo, hi = 0, 0
        for p in range(lo, hi + 1):
            a = intersect_subspaces(f[p], wn)
            b = intersect_subspaces(conj_subspace(f[n + 1 - p]), wn)
            b_plus = sum_subspaces(b, wprev)
            spans = sum_subspaces(a, b_plus) == wn
            disjoint = contains(wprev, intersect_subspaces(a, b_plus))
            report.record(f"pure[n={n},p={p}]", spans and disjoint)
    return report


def deligne_splitting(mhs: MixedHodgeStructure) -> BiGrading:
    """Deligne's bigrading ``I^{p,q}`` of a validated mixed Hodge structure.

    ``I^{p,q} = V^p_{p+q} ∩ (conj V^q_{p+q} + conj U^{q-1}_{p+q-2})`` with
    ``V^p_n = F^p ∩ W_n`` and ``U^m_n = Σ_{j>=0} V^{m-j}_{n-j}``.
    """
    if not mhs.validated:
        raise NotValidated("deligne_splitting needs a validated mixed Hodge structure")
    w, f = mhs.weight, mhs.hodge
    dim = mhs.ambient_dim
    weights = w.jumps()
    hodge_idx = f.jumps()
    if not weights or not hodge_idx:
        return BiGrading(dim, {})
    n_lo = weights[0]

    @lru_cache(maxsize=None)
    def v(p: int, n: int) -> Subspace:
        return intersect_subspaces(f[p], w[n])

    @lru_cache(maxsize=None)
    def u(m: int, n: int) -> Subspace:
        if n < n_lo:
            return Subspace.zero(dim)
        return sum_subspaces(v(m, n), u(m - 1, n - 1))

    pieces = {}
    for n in _coordinate_range(weights):
        for p in _coordinate_range(hodge_idx):
            q = n - p
            left = v(p, n)
            if left.is_zero():
                continue
            right = sum_subspaces(conj_subspace(v(q, n)), conj_subspace(u(q - 1, n - 2)))
            piece = intersect_subspaces(left, right)
            if not piece.is_zero():
                pieces[LatticeIndex(p, q)] = piece
    return BiGrading(dim, pieces)


def verify_splitting(bg: BiGrading, mhs: MixedHodgeStructure) -> ValidationReport:
    """Check the defining identities of a Deligne splitting of ``mhs``.

    Checks: the pieces form a direct sum; ``W_n`` and ``F^p`` are the expected
    sums of pieces; ``I^{p,q}`` and ``conj I^{q,p}`` agree modulo
    ``D_{p-1,q-1}`` (both containments); ``D_{p,q} = conj D_{q,p}``; and
    ``W_n = Σ_{p+q=n} D_{p,q}``.
    """
    if bg.ambient_dim != mhs.ambient_dim:
        raise DimensionMismatch("bigrading and structure live in different dimensions")
    dim = bg.ambient_dim
    w, f = mhs.weight, mhs.hodge
    report = ValidationReport()
    report.record("direct_sum", bg.is_direct_sum())

    weights = set(w.jumps()) | set(bg.weights())
    hodge_idx = set(f.jumps()) | {idx.p for idx in bg.pieces}
    for n in _coordinate_range(list(weights) + [min(weights, default=0) - 1, max(weights, default=0) + 1]):
        report.record(f"weight[{n}]", bg.weight_space(n) == w[n])
    for p in _coordinate_range(list(hodge_idx) + [min(hodge_idx, default=0) - 1, max(hodge_idx, default=0) + 1]):
        report.record(f"hodge[{p}]", bg.hodge_space(p) == f[p])

    coords = {c for idx in bg.pieces for c in idx}
    grid = _coordinate_range(coords)
    d = {(p, q): bg.bifiltration(p, q) for p in grid for q in grid}

    def dspace(p: int, q: int) -> Subspace:
        if not coords or p < grid.start or q < grid.start:
            return Subspace.zero(dim)
        return d[(min(p, grid.stop - 1), min(q, grid.stop - 1))]

    for (p, q), piece in bg.pieces.items():
        lower = dspace(p - 1, q - 1)
        mirror = conj_subspace(bg[(q, p)])
        forward = contains(sum_subspaces(mirror, lower), piece)
        backward = contains(sum_subspaces(piece, lower), mirror)
        report.record(f"conj_congruence[{p},{q}]", forward and backward)
    for (p, q), idx_missing in _missing_mirrors(bg):
        report.record(f"conj_congruence[{p},{q}]", idx_missing)

    for p in grid:
        for q in grid:
            report.record(f"bifiltration_conj[{p},{q}]", dspace(p, q) == conj_subspace(dspace(q, p)))

    for n in _coordinate_range(list(weights)):
        total = sum_all((dspace(p, n - p) for p in grid), dim)
        report.record(f"weight_from_bifiltration[{n}]", total == w[n])
    return report


def _missing_mirrors(bg: BiGrading):
    # a piece I^{q,p} with no partner I^{p,q} still has to satisfy the congruence:
    # conj(I^{q,p}) must vanish modulo D_{p-1,q-1}
    for (q, p), piece in bg.pieces.items():
        if LatticeIndex(p, q) in bg.pieces:
            continue
        lower = bg.bifiltration(p - 1, q - 1)
        yield (p, q), contains(lower, conj_subspace(piece))


def bigrading_to_filtrations(bg: BiGrading) -> tuple[WeightFiltration, HodgeFiltration]:
    """Read off ``W_n = ⊕_{p+q<=n} I^{p,q}`` and ``F^p = ⊕_{k>=p} I^{k,q}``.

    Raises:
        NotDirectSum: the pieces do not decompose the ambient space.
        NotRealWeight: some ``W_n`` is not defined over R.
    """
    if not bg.is_direct_sum():
        raise NotDirectSum("pieces do not form a direct sum decomposition of the ambient space")
    wsteps = []
    for n in bg.weights():
        wn = bg.weight_space(n)
        if conj_subspace(wn) != wn:
            raise NotRealWeight(f"W_{n} is not conjugation-stable")
        wsteps.append((n, wn))
    fsteps = [(p, bg.hodge_space(p)) for p in sorted({idx.p for idx in bg.pieces})]
    return WeightFiltration(bg.ambient_dim, tuple(wsteps)).canonical(), HodgeFiltration(bg.ambient_dim, tuple(fsteps)).canonical()


def hodge_numbers(bg: BiGrading) -> dict[LatticeIndex, int]:
    return {idx: s.dim for idx, s in bg.pieces.items()}


def real_basis_of_weight(w: WeightFiltration, n: int) -> Matrix:
    """A basis of ``W_n`` made of real vectors, as matrix columns.

    Raises:
        NotReal: if ``W_n`` is not conjugation-stable.
    """
    wn = w[n]
    if conj_subspace(wn) != wn:
        raise NotReal(f"W_{n} is not conjugation-stable")
    vectors = []
    for v in wn.vectors:
        cv = conj_vector(v)
        vectors.append(tuple(a + b for a, b in zip(v, cv)))
        vectors.append(tuple(I * (a - b) for a, b in zip(v, cv)))
    return Subspace(vectors, w.ambient_dim).basis
