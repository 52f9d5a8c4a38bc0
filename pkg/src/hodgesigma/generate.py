"""Seeded random instances for property tests of the MHS / σ-operator correspondence."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Literal, Mapping

from .errors import ExhaustedRetries
from .gaussian import ONE, ZERO, GaussianRational, LatticeIndex
from .hodge import (
    BiGrading,
    MixedHodgeStructure,
    bigrading_to_filtrations,
    validate_mhs,
    verify_splitting,
)
from .linalg import Matrix, Subspace, Vector
from .operators import (
    certify_sigma_operator,
    check_pseudo_real,
    matrix_from_bigrading,
    operator_from_mhs,
)

Flavor = Literal["real", "strong", "weak_only"]


@dataclass(frozen=True)
class GenProfile:
    """Hodge numbers of the instances to generate, plus coefficient size and seed.

    ``dims[(p, q)]`` must equal ``dims[(q, p)]``.
    """

    dims: Mapping[tuple[int, int], int]
    coefficient_bound: int = 2
    seed: int = 0
    retries: int = 20

    def __post_init__(self):
        clean = {}
        for (p, q), d in self.dims.items():
            if d < 0:
                raise ValueError(f"negative dimension at ({p},{q})")
            if d:
                clean[LatticeIndex(int(p), int(q))] = int(d)
        for (p, q), d in clean.items():
            if clean.get(LatticeIndex(q, p), 0) != d:
                raise ValueError(f"dims({p},{q}) = {d} but dims({q},{p}) = {clean.get(LatticeIndex(q, p), 0)}")
        if self.coefficient_bound < 1:
            raise ValueError("coefficient_bound must be positive")
        object.__setattr__(self, "dims", dict(sorted(clean.items())))

    @property
    def total_dim(self) -> int:
        return sum(self.dims.values())

    def with_seed(self, seed: int) -> GenProfile:
        return GenProfile(self.dims, self.coefficient_bound, seed, self.retries)

    def rng(self) -> random.Random:
        return random.Random(self.seed)


def _rational(rng: random.Random, bound: int) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def _gaussian(rng: random.Random, bound: int) -> GaussianRational:
    return GaussianRational(_rational(rng, bound), _rational(rng, bound))


def _unimodular_real(rng: random.Random, n: int, bound: int, density: float = 0.35) -> Matrix:
    """Random real matrix ``P L U`` with unit-triangular integer ``L``, ``U``."""
    def tri(lower: bool) -> list[list[int]]:
        rows = [[int(i == j) for j in range(n)] for i in range(n)]
        for i in range(n):
            for j in range(n):
                if (j < i if lower else j > i) and rng.random() < density:
                    rows[i][j] = rng.randint(-bound, bound)
        return rows

    lower, upper = Matrix(tri(True)), Matrix(tri(False))
    perm = list(range(n))
    rng.shuffle(perm)
    p = Matrix([[int(perm[i] == j) for j in range(n)] for i in range(n)])
    return p @ lower @ upper


def random_split_bigrading(profile: GenProfile, rng: random.Random | None = None) -> BiGrading:
    """A bigrading with ``I^{p,q} = conj(I^{q,p})`` exactly, in a random real basis."""
    rng = rng or profile.rng()
    n = profile.total_dim
    vectors: dict[LatticeIndex, list[list[GaussianRational]]] = {}
    slot = 0

    def unit(k: int) -> list[GaussianRational]:
        v = [ZERO] * n
        v[k] = ONE
        return v

    i = GaussianRational(0, 1)
    for idx, d in profile.dims.items():
        p, q = idx
        if p == q:
            vectors[idx] = [unit(slot + k) for k in range(d)]
            slot += d
        elif p > q:
            mirror = LatticeIndex(q, p)
            here, there = [], []
            for k in range(d):
                x, y = slot + 2 * k, slot + 2 * k + 1
                v = unit(x)
                v[y] = i
                w = unit(x)
                w[y] = -i
                here.append(v)
                there.append(w)
            vectors[idx], vectors[mirror] = here, there
            slot += 2 * d
    change = _unimodular_real(rng, n, profile.coefficient_bound) if n else Matrix.zeros(0, 0)
    pieces = {idx: Subspace([change.apply(v) for v in vs], n) for idx, vs in vectors.items()}
    return BiGrading(n, pieces)


def _shift_pieces(bg: BiGrading, rng: random.Random, bound: int, allowed, density: float) -> BiGrading:
    """Add to each basis vector of ``I^{p,q}`` random multiples of vectors of pieces ``I^{k,l}``
    with ``allowed((k, l), (p, q))``."""
    n = bg.ambient_dim
    pieces = {}
    for idx, s in bg.pieces.items():
        donors = [v for other, t in bg.pieces.items() if allowed(other, idx) for v in t.vectors]
        new = []
        for v in s.vectors:
            out = list(v)
            for d in donors:
                if rng.random() >= density:
                    continue
                c = _gaussian(rng, bound)
                out = [a + c * b for a, b in zip(out, d)]
            new.append(out)
        pieces[idx] = Subspace(new, n)
    return BiGrading(n, pieces)


def _strictly_below(other: LatticeIndex, idx: LatticeIndex) -> bool:
    return other.p < idx.p and other.q < idx.q


def _splitting_is_consistent(bg: BiGrading) -> bool:
    w, f = bigrading_to_filtrations(bg)
    return verify_splitting(bg, MixedHodgeStructure(w, f)).ok


def perturb_bigrading(bg: BiGrading, profile: GenProfile, rng: random.Random | None = None, density: float = 0.5) -> BiGrading:
    """Apply ``1 + T`` with ``T(I^{p,q}) ⊆ D_{p-1,q-1}``; the result is checked, not trusted.

    Raises:
        ExhaustedRetries: no candidate passed :func:`verify_splitting` within
            ``profile.retries`` attempts.
    """
    rng = rng or profile.rng()
    for _ in range(profile.retries):
        out = _shift_pieces(bg, rng, profile.coefficient_bound, _strictly_below, density)
        if out.is_direct_sum() and _splitting_is_consistent(out):
            return out
    raise ExhaustedRetries(f"no valid perturbation after {profile.retries} attempts")


def random_mhs(profile: GenProfile, rng: random.Random | None = None) -> MixedHodgeStructure:
    """A validated mixed Hodge structure with the profile's Hodge numbers."""
    rng = rng or profile.rng()
    for _ in range(profile.retries):
        bg = perturb_bigrading(random_split_bigrading(profile, rng), profile, rng)
        w, f = bigrading_to_filtrations(bg)
        report = validate_mhs(w, f)
        if report.ok:
            return MixedHodgeStructure(w, f, validated=True, report=report)
    raise ExhaustedRetries(f"no valid mixed Hodge structure after {profile.retries} attempts")


def _chiral_lean(other: LatticeIndex, idx: LatticeIndex) -> bool:
    # lower weight but not below in both indices: keeps weak pseudo-reality, breaks strong
    return other.weight < idx.weight and not _strictly_below(other, idx)


def random_sigma_operator(profile: GenProfile, flavor: Flavor, rng: random.Random | None = None) -> Matrix:
    """A σ-operator matrix of the requested flavor.

    ``real``: conjugation-invariant matrix acting as ``λ_{p,q}`` on a split bigrading.
    ``strong``: the operator of a random mixed Hodge structure.
    ``weak_only``: a split bigrading whose higher-weight pieces lean into
    lower-weight pieces that are not strictly below them; accepted only when
    weakly but not strongly pseudo-real.

    Raises:
        ExhaustedRetries: a ``weak_only`` search failed (e.g. the profile has no
            pair of weights with the needed index pattern).
    """
    rng = rng or profile.rng()
    if flavor == "real":
        m = matrix_from_bigrading(random_split_bigrading(profile, rng))
        assert m.is_real()
        return m
    if flavor == "strong":
        return operator_from_mhs(random_mhs(profile, rng)).matrix
    if flavor == "weak_only":
        for _ in range(profile.retries):
            bg = _shift_pieces(random_split_bigrading(profile, rng), rng, profile.coefficient_bound, _chiral_lean, 0.5)
            if not bg.is_direct_sum():
                continue
            op = certify_sigma_operator(matrix_from_bigrading(bg))
            if check_pseudo_real(op, "weak").holds and not check_pseudo_real(op, "strong").holds:
                return op.matrix
        raise ExhaustedRetries(f"no weakly-but-not-strongly pseudo-real operator after {profile.retries} attempts")
    raise ValueError(f"unknown flavor {flavor!r}")


def random_lattice_operator(profile: GenProfile, rng: random.Random | None = None) -> Matrix:
    """Operator with the profile's spectrum on a random complex eigenbasis (usually not pseudo-real)."""
    rng = rng or profile.rng()
    n = profile.total_dim
    for _ in range(profile.retries):
        basis = [[_gaussian(rng, profile.coefficient_bound) for _ in range(n)] for _ in range(n)]
        pieces, k = {}, 0
        for idx, d in profile.dims.items():
            pieces[idx] = Subspace(basis[k:k + d], n)
            k += d
        bg = BiGrading(n, pieces)
        if bg.is_direct_sum():
            return matrix_from_bigrading(bg)
    raise ExhaustedRetries("random eigenbasis kept coming out singular")


STANDARD_PROFILES: dict[str, dict[tuple[int, int], int]] = {
    "trivial": {(0, 0): 2},
    "tate_extension": {(0, 0): 1, (1, 1): 1},
    "curve": {(1, 0): 1, (0, 1): 1},
    "curve_and_tate": {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1},
    "mixed_curve": {(1, 0): 1, (0, 1): 1, (1, 1): 1},
    "surface_like": {(2, 0): 1, (1, 1): 2, (0, 2): 1, (0, 0): 1},
    "three_weights": {(0, 0): 1, (1, 0): 1, (0, 1): 1, (1, 1): 1, (2, 1): 1, (1, 2): 1, (2, 2): 1},
    "wide": {(2, 0): 1, (0, 2): 1, (1, 0): 1, (0, 1): 1, (0, 0): 2, (1, 1): 1, (2, 2): 1},
}


def standard_profile(name: str, seed: int = 0, coefficient_bound: int = 2) -> GenProfile:
    return GenProfile(STANDARD_PROFILES[name], coefficient_bound, seed)
