"""Floating-point Weierstrass σ for the lattice Z(1-i) + Z(1+i).

σ is evaluated from its genus-2 canonical product truncated to the square
``max(|p|, |q|) <= N`` in index space. The truncation set is stable under
``λ -> iλ`` and ``λ -> conj λ``, so the truncated product is exactly odd,
conjugation-symmetric and rotation-homogeneous; only its size is approximate.

Because the tail is also stable under ``λ -> iλ``, the cubic terms of the
tail's logarithm cancel and the log-relative truncation error is bounded by
``Σ_tail |z/λ|^4 / (4 (1 - |z|/R))`` with ``R`` the smallest omitted modulus.
That bound is what :class:`Evaluation` reports as ``error_estimate``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import IllConditioned, TruncationInsufficient
from .gaussian import LatticeIndex
from .linalg import Matrix

# Below this distance from λ, σ_λ(z) is computed with the λ factor removed
# instead of dividing σ(z) by (z - λ).
SWITCH_RADIUS = 0.5


@dataclass(frozen=True)
class TruncationParams:
    N: int = 40
    target_tol: float = 1.0

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("truncation radius N must be at least 1")
        if not self.target_tol > 0:
            raise ValueError("target_tol must be positive")

    @property
    def reliability_radius(self) -> float:
        return self.N / 4


@dataclass(frozen=True)
class Evaluation:
    value: complex
    error_estimate: float


@lru_cache(maxsize=8)
def _lattice(N: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Nonzero lattice points of the truncation square sorted by modulus, with their indices."""
    r = np.arange(-N, N + 1)
    p, q = np.meshgrid(r, r, indexing="ij")
    p, q = p.ravel(), q.ravel()
    keep = (p != 0) | (q != 0)
    p, q = p[keep], q[keep]
    lam = (p + q) + 1j * (q - p)
    order = np.argsort(np.abs(lam), kind="stable")
    return lam[order], p[order], q[order]


def tail_estimate(z: complex, N: int) -> float:
    """Upper bound for the log-relative error of truncating at ``N``."""
    r_min = math.sqrt(2.0) * (N + 1)
    az = abs(z)
    if az >= r_min:
        return math.inf
    # lattice cells have area 2 and radius 1; compare the sum with an integral
    quartic = math.pi / (2.0 * (r_min - 1.0) ** 2)
    return az ** 4 * quartic / (4.0 * (1.0 - az / r_min))


def _check(z: complex, params: TruncationParams) -> float:
    if not (math.isfinite(z.real) and math.isfinite(z.imag)):
        raise ValueError("z must be finite")
    if abs(z) > params.reliability_radius:
        raise TruncationInsufficient(f"|z| = {abs(z):.3g} exceeds the reliability radius N/4 = {params.reliability_radius}")
    est = tail_estimate(z, params.N)
    if est > params.target_tol:
        raise TruncationInsufficient(f"tail estimate {est:.3g} exceeds target_tol {params.target_tol:.3g}; increase N")
    return est


def _factors(z: complex, lam: np.ndarray) -> np.ndarray:
    u = z / lam
    linear = 1.0 - u
    # rounding in z/λ must not hide the zero at z = λ
    linear[lam == z] = 0.0
    return linear * np.exp(u + 0.5 * u * u)


def _product(f: np.ndarray) -> complex:
    return complex(np.multiply.reduce(f)) if len(f) else 1.0 + 0j


def sigma_eval(z: complex, params: TruncationParams = TruncationParams()) -> Evaluation:
    """Truncated canonical product ``z Π (1 - z/λ) exp(z/λ + (z/λ)^2/2)``."""
    z = complex(z)
    est = _check(z, params)
    if z == 0:
        return Evaluation(0j, 0.0)
    lam, _, _ = _lattice(params.N)
    return Evaluation(z * _product(_factors(z, lam)), est)


def sigma_lambda_eval(z: complex, idx: tuple[int, int], params: TruncationParams = TruncationParams()) -> Evaluation:
    """``σ(z) / (z - λ_{p,q})``, finite at ``z = λ_{p,q}``."""
    z = complex(z)
    est = _check(z, params)
    p, q = idx
    lam0 = complex(p + q, q - p)
    if max(abs(p), abs(q)) > params.N:
        raise TruncationInsufficient(f"lattice index {tuple(idx)} lies outside the truncation N={params.N}")
    if abs(z - lam0) >= SWITCH_RADIUS:
        s = sigma_eval(z, params).value
        return Evaluation(s / (z - lam0), est)
    lam, lp, lq = _lattice(params.N)
    if lam0 == 0:
        # σ(z)/z is the product itself
        return Evaluation(_product(_factors(z, lam)), est)
    keep = ~((lp == p) & (lq == q))
    u0 = z / lam0
    # (1 - z/λ0) / (z - λ0) = -1/λ0
    removed = -np.exp(u0 + 0.5 * u0 * u0) / lam0
    return Evaluation(complex(z * removed * _product(_factors(z, lam[keep]))), est)


def sigma_prime_at(idx: tuple[int, int], params: TruncationParams = TruncationParams()) -> Evaluation:
    """``σ'(λ_{p,q}) = σ_{p,q}(λ_{p,q})``."""
    p, q = idx
    return sigma_lambda_eval(complex(p + q, q - p), LatticeIndex(p, q), params)


@dataclass(frozen=True)
class NumericSigmaResult:
    norm: float
    condition: float
    ill_conditioned: bool
    eigenvalues: tuple[complex, ...]


def numeric_sigma_of_matrix(
    m: Matrix,
    params: TruncationParams = TruncationParams(),
    max_condition: float = 1e8,
    strict: bool = False,
) -> NumericSigmaResult:
    """Spectral norm of ``σ(m)`` computed by numerical diagonalization.

    An eigenbasis with condition number above ``max_condition`` is flagged in
    the result (``strict=True`` raises :class:`IllConditioned` instead); the
    norm is then meaningless.
    """
    if not m.is_square():
        raise ValueError("matrix must be square")
    a = m.to_numpy()
    if a.size == 0:
        return NumericSigmaResult(0.0, 1.0, False, ())
    w, v = np.linalg.eig(a)
    cond = float(np.linalg.cond(v))
    if not math.isfinite(cond) or cond > max_condition:
        if strict:
            raise IllConditioned(f"eigenbasis condition number {cond:.3g} exceeds {max_condition:.3g}")
        return NumericSigmaResult(math.nan, cond, True, tuple(complex(x) for x in w))
    values = np.array([sigma_eval(complex(x), params).value for x in w])
    s = v @ np.diag(values) @ np.linalg.inv(v)
    return NumericSigmaResult(float(np.linalg.norm(s, 2)), cond, False, tuple(complex(x) for x in w))
