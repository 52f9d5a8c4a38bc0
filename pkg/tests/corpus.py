"""Shared fixtures and instance corpora for the test suite."""

from __future__ import annotations

from functools import lru_cache

from hodgesigma.generate import STANDARD_PROFILES, GenProfile, random_lattice_operator, random_mhs, random_sigma_operator
from hodgesigma.hodge import HodgeFiltration, MixedHodgeStructure, WeightFiltration
from hodgesigma.linalg import Matrix, Subspace

E1, E2 = (1, 0), (0, 1)

# the running 2-dimensional example: W_0 = span{e1}, F^1 = span{e2 + i e1}
DIM2_WEIGHT = WeightFiltration(2, ((0, Subspace([E1], 2)), (2, Subspace.full(2))))
DIM2_HODGE = HodgeFiltration(2, ((0, Subspace.full(2)), (1, Subspace([(1j, 1)], 2)), (2, Subspace.zero(2))))
DIM2_OPERATOR = Matrix([[0, 2j], [0, 2]])

A1 = Matrix([[1, -1, 0], [1, 1, 0], [0, 0, 2]])
A2 = Matrix([[1, -1, 1 + 1j], [1, 1, 1j - 1], [0, 0, 2]])


def dim2_mhs() -> MixedHodgeStructure:
    return MixedHodgeStructure.checked(DIM2_WEIGHT, DIM2_HODGE)


# profiles used for the acceptance corpus; all of total dimension <= 8
CORPUS_PROFILES = ("tate_extension", "curve", "curve_and_tate", "mixed_curve", "surface_like", "three_weights", "wide")


@lru_cache(maxsize=None)
def mhs_corpus(per_profile: int = 30) -> tuple[MixedHodgeStructure, ...]:
    out = []
    for k, name in enumerate(CORPUS_PROFILES):
        for seed in range(per_profile):
            out.append(random_mhs(GenProfile(STANDARD_PROFILES[name], seed=1000 * k + seed)))
    return tuple(out)


WEAK_ONLY_PROFILES = ("mixed_curve", "curve_and_tate", "three_weights")


@lru_cache(maxsize=None)
def operator_corpus(per_kind: int = 10) -> tuple[tuple[str, Matrix], ...]:
    """Labelled matrices of every flavor, all σ-operators by construction."""
    out = []
    for k, name in enumerate(CORPUS_PROFILES):
        dims = STANDARD_PROFILES[name]
        for seed in range(per_kind):
            profile = GenProfile(dims, seed=7000 + 100 * k + seed)
            out.append(("real", random_sigma_operator(profile, "real")))
            out.append(("strong", random_sigma_operator(profile, "strong")))
            out.append(("lattice", random_lattice_operator(profile)))
            if name in WEAK_ONLY_PROFILES:
                out.append(("weak_only", random_sigma_operator(profile, "weak_only")))
    return tuple(out)
