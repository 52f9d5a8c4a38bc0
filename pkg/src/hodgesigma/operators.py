"""σ-operators: certification, eigenprojectors and pseudo-reality.

Since the Weierstrass σ-function has simple zeros exactly at the lattice points,
``σ(A) = 0`` holds precisely when ``A`` is semisimple with every eigenvalue in
the lattice. Certification decides this exactly: candidate eigenvalues are the
lattice points near floating-point eigenvalue estimates, confirmed exactly
against the characteristic polynomial and deflated out of it. When the
multiplicities found do not exhaust the degree, every lattice point inside a
Gershgorin-type region is examined as well, so no lattice eigenvalue is missed.
Finally the eigenspace dimensions must add up to the size of the matrix.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Literal, Mapping, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    NotPseudoReal,
    NotReal,
    NotSigmaOperator,
    NotStronglyPseudoReal,
    NotValidated,
    SingularMatrix,
    SingularRestriction,
)
from .gaussian import ONE, ZERO, GaussianRational, LatticeIndex, lattice_decode, lattice_embed
from .hodge import (
    BiGrading,
    HodgeFiltration,
    MixedHodgeStructure,
    ValidationReport,
    WeightFiltration,
    deligne_splitting,
    validate_mhs,
)
from .linalg import Matrix, Subspace, Vector, conj_subspace, contains, kernel, solve, sum_all

Mode = Literal["weak", "strong"]

# Rounding error of a floating-point Horner evaluation of a degree-n polynomial is
# far below this fraction of sum |c_k| |z|^k for the sizes handled here.
_HORNER_SLACK = 1e-9
_CHUNK = 1 << 20


@dataclass(frozen=True)
class Certificate:
    """How a matrix was certified.

    ``discs`` holds one ``(center, radius)`` pair per row and per column; every
    eigenvalue ``z`` satisfies ``l1(z - center)^2 <= 2 * radius^2`` for some row
    disc and for some column disc, where ``l1(x) = |Re x| + |Im x|``.
    """

    discs: tuple[tuple[GaussianRational, Fraction], ...]
    candidates: int
    charpoly: tuple[GaussianRational, ...]
    multiplicities: Mapping[LatticeIndex, int]
    dims: Mapping[LatticeIndex, int]
    # "deflation": the exact roots found exhaust the characteristic polynomial;
    # "gershgorin": the whole disc region was scanned
    route: str = "gershgorin"

    def to_dict(self) -> dict:
        return {
            "route": self.route,
            "candidates_examined": self.candidates,
            "dimension_total": sum(self.dims.values()),
            "eigenvalues": [
                {"p": idx.p, "q": idx.q, "algebraic": self.multiplicities[idx], "geometric": self.dims.get(idx, 0)}
                for idx in sorted(self.multiplicities)
            ],
        }


@dataclass(frozen=True, eq=False)
class SigmaOperator:
    matrix: Matrix
    spectrum: Mapping[LatticeIndex, Subspace]
    certificate: Certificate | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.matrix.rows

    @cached_property
    def _eigenbasis(self) -> tuple[Matrix, Matrix, list[tuple[LatticeIndex, int, int]]]:
        cols: list[Vector] = []
        blocks = []
        for idx in sorted(self.spectrum):
            start = len(cols)
            cols.extend(self.spectrum[idx].vectors)
            blocks.append((idx, start, len(cols)))
        b = Matrix.from_columns(cols, self.dim)
        return b, b.inverse(), blocks

    def conj(self) -> SigmaOperator:
        """The conjugate operator; its eigenspaces are ``conj(I^{q,p})``."""
        spectrum = {idx.swapped(): conj_subspace(s) for idx, s in self.spectrum.items()}
        return SigmaOperator(self.matrix.conj(), dict(sorted(spectrum.items())))

    def __eq__(self, other):
        if not isinstance(other, SigmaOperator):
            return NotImplemented
        return self.matrix == other.matrix and dict(self.spectrum) == dict(other.spectrum)


@dataclass(frozen=True)
class OperatorFiltrations:
    weight: WeightFiltration
    hodge: HodgeFiltration
    bifiltration: Mapping[tuple[int, int], Subspace]


@dataclass(frozen=True)
class PseudoRealityVerdict:
    mode: Mode
    holds: bool
    witnesses: tuple[tuple[LatticeIndex, LatticeIndex], ...] = ()

    def to_dict(self) -> dict:
        return {
            "mode": self.mode,
            "holds": self.holds,
            "witnesses": [[list(a), list(b)] for a, b in self.witnesses],
        }


# -- characteristic polynomial and lattice roots ---------------------------------


def charpoly(m: Matrix) -> tuple[GaussianRational, ...]:
    """Coefficients ``c_0..c_n`` (``c_n = 1``) of ``det(z I - m)`` by Faddeev-LeVerrier."""
    n = m.rows
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    mk = Matrix.zeros(n, n)
    ident = Matrix.identity(n)
    for k in range(1, n + 1):
        mk = m @ mk + ident.scale(coeffs[n - k + 1])
        coeffs[n - k] = -((m @ mk).trace()) / k
    return tuple(coeffs)


def _integer_poly(coeffs: Sequence[GaussianRational]) -> list[tuple[int, int]]:
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.triple[2])
    return [(c.triple[0] * (den // c.triple[2]), c.triple[1] * (den // c.triple[2])) for c in coeffs]


def _is_root(ipoly: Sequence[tuple[int, int]], x: int, y: int) -> bool:
    re, im = 0, 0
    for a, b in reversed(ipoly):
        re, im = re * x - im * y + a, re * y + im * x + b
    return re == 0 and im == 0


def _deflate(coeffs: list[GaussianRational], root: GaussianRational) -> tuple[list[GaussianRational], GaussianRational]:
    """Synthetic division by ``z - root``; returns quotient and remainder."""
    n = len(coeffs) - 1
    out = [ZERO] * n
    acc = ZERO
    for k in range(n, 0, -1):
        acc = acc * root + coeffs[k]
        out[k - 1] = acc
    rem = acc * root + coeffs[0]
    return out, rem


def _discs(m: Matrix) -> list[tuple[GaussianRational, Fraction]]:
    n = m.rows
    rows = []
    cols = []
    for i in range(n):
        rows.append((m[i, i], sum((m[i, j].l1() for j in range(n) if j != i), Fraction(0))))
        cols.append((m[i, i], sum((m[j, i].l1() for j in range(n) if j != i), Fraction(0))))
    return rows + cols


def _in_any_disc(x: np.ndarray, y: np.ndarray, discs) -> np.ndarray:
    hit = np.zeros(x.shape, dtype=bool)
    for center, radius in discs:
        cx, cy = float(center.re), float(center.im)
        bound = math.sqrt(2.0) * float(radius) * (1 + 1e-9) + 1e-9
        hit |= (np.abs(x - cx) + np.abs(y - cy)) <= bound
    return hit


def _lattice_candidates(discs: list[tuple[GaussianRational, Fraction]], n: int, coeffs) -> tuple[list[tuple[int, int]], int]:
    """Lattice points lying in some row disc and some column disc that pass a float root screen.

    The float screen rejects ``z`` only when ``|f(z)|`` clearly exceeds the
    Horner rounding bound, so no exact root is lost.
    """
    row_discs, col_discs = discs[:n], discs[n:]
    cf = np.array([complex(c) for c in coeffs])
    screen = bool(np.all(np.isfinite(cf)))
    acf = np.abs(cf)
    seen: set[tuple[int, int]] = set()
    examined = 0
    for center, radius in row_discs:
        cx, cy = float(center.re), float(center.im)
        r = math.sqrt(2.0) * float(radius) + 1.0
        xs = np.arange(math.floor(cx - r), math.ceil(cx + r) + 1, dtype=np.int64)
        ys = np.arange(math.floor(cy - r), math.ceil(cy + r) + 1, dtype=np.int64)
        step = max(1, _CHUNK // max(1, len(ys)))
        for s in range(0, len(xs), step):
            gx, gy = np.meshgrid(xs[s:s + step], ys, indexing="ij")
            gx, gy = gx.ravel(), gy.ravel()
            keep = ((gx + gy) % 2 == 0)
            gx, gy = gx[keep], gy[keep]
            fx, fy = gx.astype(float), gy.astype(float)
            keep = _in_any_disc(fx, fy, [(center, radius)]) & _in_any_disc(fx, fy, col_discs)
            gx, gy, fx, fy = gx[keep], gy[keep], fx[keep], fy[keep]
            examined += len(gx)
            if screen and len(gx):
                z = fx + 1j * fy
                val = np.zeros_like(z)
                mag = np.zeros(z.shape)
                az = np.abs(z)
                for c, ac in zip(cf[::-1], acf[::-1]):
                    val = val * z + c
                    mag = mag * az + ac
                keep = np.abs(val) <= _HORNER_SLACK * mag + 1e-300
                gx, gy = gx[keep], gy[keep]
            for x, y in zip(gx.tolist(), gy.tolist()):
                seen.add((x, y))
    return sorted(seen), examined


def _numeric_hints(m: Matrix) -> list[tuple[int, int]]:
    """Lattice points within one unit of a floating-point eigenvalue estimate.

    Only a shortcut: each hint is confirmed exactly, and completeness is
    established by deflation or by the disc scan.
    """
    try:
        with np.errstate(all="ignore"):
            w = np.linalg.eigvals(m.to_numpy())
    except (np.linalg.LinAlgError, OverflowError, ValueError):
        return []
    out: set[tuple[int, int]] = set()
    for z in w:
        if not np.isfinite(z):
            continue
        x0, y0 = math.floor(z.real), math.floor(z.imag)
        for x in (x0 - 1, x0, x0 + 1, x0 + 2):
            for y in (y0 - 1, y0, y0 + 1, y0 + 2):
                if (x + y) % 2 == 0 and abs(x - z.real) <= 1.0 and abs(y - z.imag) <= 1.0:
                    out.add((x, y))
    return sorted(out)


def certify_sigma_operator(m: Matrix, exhaustive: bool = False) -> SigmaOperator:
    """Certify that ``m`` is a σ-operator and compute its eigenspaces.

    ``exhaustive=True`` skips the floating-point hints and always scans the
    whole disc region; the verdict is the same either way.

    Raises:
        DimensionMismatch: ``m`` is not square.
        NotSigmaOperator: some eigenvalue is off the lattice or ``m`` is not
            diagonalizable; the exception carries the spectrum found and the
            dimension deficits.
    """
    if not m.is_square():
        raise DimensionMismatch(f"σ-operators are square; got {m.shape}")
    n = m.rows
    if n == 0:
        cert = Certificate((), 0, (ONE,), {}, {})
        return SigmaOperator(m, {}, cert)
    coeffs = charpoly(m)
    discs = _discs(m)
    ipoly = _integer_poly(coeffs)

    remaining = list(coeffs)
    multiplicities: dict[LatticeIndex, int] = {}
    spectrum: dict[LatticeIndex, Subspace] = {}

    def take(x: int, y: int) -> None:
        nonlocal remaining
        lam = GaussianRational._raw(x, y, 1)
        idx = lattice_decode(lam)
        if idx in multiplicities or not _is_root(ipoly, x, y):
            return
        mult = 0
        while len(remaining) > 1:
            quotient, rem = _deflate(remaining, lam)
            if not rem.is_zero():
                break
            remaining = quotient
            mult += 1
        multiplicities[idx] = mult
        spectrum[idx] = kernel(m - Matrix.identity(n).scale(lam))

    hints = [] if exhaustive else _numeric_hints(m)
    for x, y in hints:
        take(x, y)
    examined, route = len(hints), "deflation"
    if exhaustive or len(remaining) > 1:
        points, scanned = _lattice_candidates(discs, n, coeffs)
        examined, route = examined + scanned, "gershgorin"
        for x, y in points:
            take(x, y)

    dims = {idx: s.dim for idx, s in spectrum.items()}
    cert = Certificate(tuple(discs), examined, coeffs, dict(sorted(multiplicities.items())), dims, route)
    if sum(dims.values()) != n:
        deficits = {idx: multiplicities[idx] - d for idx, d in dims.items() if multiplicities[idx] > d}
        raise NotSigmaOperator(dims, deficits, len(remaining) - 1, n)
    return SigmaOperator(m, dict(sorted(spectrum.items())), cert)


# -- projectors and pseudo-reality -----------------------------------------------


def projector(op: SigmaOperator, idx: tuple[int, int]) -> Matrix:
    """Projection onto ``I^{p,q}_A`` along the other eigenspaces (zero if absent)."""
    idx = LatticeIndex(*idx)
    n = op.dim
    if idx not in op.spectrum:
        return Matrix.zeros(n, n)
    b, binv, blocks = op._eigenbasis
    for key, start, stop in blocks:
        if key == idx:
            mask = [ONE if start <= j < stop else ZERO for j in range(n)]
            break
    return b @ Matrix.diagonal(mask) @ binv


def _required(mode: Mode, rs: LatticeIndex, pq: LatticeIndex) -> bool:
    if mode == "weak":
        return rs.p + rs.q >= pq.p + pq.q
    if mode == "strong":
        return rs.p >= pq.p or rs.q >= pq.q
    raise ValueError(f"unknown mode {mode!r}")


def check_pseudo_real(op: SigmaOperator, mode: Mode) -> PseudoRealityVerdict:
    """Evaluate ``P_{r,s} (conj A - A) P_{p,q} = 0`` over the mode's index pairs.

    ``σ_{p,q}(A)`` is a nonzero multiple of ``P_{p,q}`` because the zeros of σ
    are simple, so this is the same condition as with ``σ_{r,s}(A)`` and
    ``σ_{p,q}(A)``. Indices outside the spectrum have zero projector.
    """
    if mode not in ("weak", "strong"):
        raise ValueError(f"unknown mode {mode!r}")
    diff = op.matrix.conj() - op.matrix
    witnesses = []
    if not diff.is_zero():
        projs = {idx: projector(op, idx) for idx in op.spectrum}
        right = {idx: diff @ p for idx, p in projs.items()}
        for rs in op.spectrum:
            for pq in op.spectrum:
                if _required(mode, rs, pq) and not (projs[rs] @ right[pq]).is_zero():
                    witnesses.append((rs, pq))
    return PseudoRealityVerdict(mode, not witnesses, tuple(witnesses))


def operator_filtrations(op: SigmaOperator) -> OperatorFiltrations:
    n = op.dim
    spectrum = op.spectrum
    weights = sorted({idx.weight for idx in spectrum})
    ps = sorted({idx.p for idx in spectrum})
    wsteps = [(k, sum_all((s for idx, s in spectrum.items() if idx.weight <= k), n)) for k in weights]
    fsteps = [(p, sum_all((s for idx, s in spectrum.items() if idx.p >= p), n)) for p in ps]
    coords = sorted({c for idx in spectrum for c in idx})
    bif = {}
    for p in coords:
        for q in coords:
            bif[(p, q)] = sum_all((s for idx, s in spectrum.items() if idx.p <= p and idx.q <= q), n)
    return OperatorFiltrations(WeightFiltration(n, tuple(wsteps)).canonical(), HodgeFiltration(n, tuple(fsteps)).canonical(), bif)


def _bifiltration(op: SigmaOperator, p: int, q: int) -> Subspace:
    return sum_all((s for idx, s in op.spectrum.items() if idx.p <= p and idx.q <= q), op.dim)


def _weight_space(op: SigmaOperator, n: int) -> Subspace:
    return sum_all((s for idx, s in op.spectrum.items() if idx.weight <= n), op.dim)


def weakly_equivalent(a: SigmaOperator, b: SigmaOperator) -> bool:
    """Same weight filtration, and ``a - b`` lowers it by one step."""
    if a.dim != b.dim:
        raise DimensionMismatch("operators act on spaces of different dimension")
    diff = a.matrix - b.matrix
    weights = sorted({idx.weight for idx in a.spectrum} | {idx.weight for idx in b.spectrum})
    for n in weights:
        wa = _weight_space(a, n)
        if wa != _weight_space(b, n):
            return False
        if not contains(_weight_space(a, n - 1), wa.image(diff)):
            return False
    return True


def strongly_equivalent(a: SigmaOperator, b: SigmaOperator) -> bool:
    """Same bifiltration ``D``, and ``a - b`` maps ``D_{p,q}`` into ``D_{p-1,q-1}``."""
    if a.dim != b.dim:
        raise DimensionMismatch("operators act on spaces of different dimension")
    diff = a.matrix - b.matrix
    coords = sorted({c for op in (a, b) for idx in op.spectrum for c in idx})
    for p in coords:
        for q in coords:
            da = _bifiltration(a, p, q)
            if da != _bifiltration(b, p, q):
                return False
            if not contains(_bifiltration(a, p - 1, q - 1), da.image(diff)):
                return False
    return True


# -- the correspondence --------------------------------------------------------------


def matrix_from_bigrading(bg: BiGrading) -> Matrix:
    """The matrix acting as ``λ_{p,q}`` on each piece ``I^{p,q}``."""
    n = bg.ambient_dim
    cols: list[Vector] = []
    diag: list[GaussianRational] = []
    for idx, s in sorted(bg.pieces.items()):
        cols.extend(s.vectors)
        diag.extend([lattice_embed(idx)] * s.dim)
    if len(cols) != n:
        raise DimensionMismatch("pieces do not add up to the ambient dimension")
    if n == 0:
        return Matrix.zeros(0, 0)
    b = Matrix.from_columns(cols, n)
    try:
        binv = b.inverse()
    except SingularMatrix as exc:
        raise DimensionMismatch("pieces are not independent") from exc
    return b @ Matrix.diagonal(diag) @ binv


def operator_from_mhs(mhs: MixedHodgeStructure) -> SigmaOperator:
    """The operator ``⊕ λ_{p,q} id`` on the Deligne splitting of ``mhs``."""
    if not mhs.validated:
        raise NotValidated("operator_from_mhs needs a validated mixed Hodge structure")
    bg = deligne_splitting(mhs)
    op = certify_sigma_operator(matrix_from_bigrading(bg))
    assert dict(op.spectrum) == dict(bg.pieces), "eigenspaces differ from the Deligne splitting"
    assert check_pseudo_real(op, "strong").holds, "operator of a mixed Hodge structure is not strongly pseudo-real"
    return op


def mhs_from_operator(op: SigmaOperator) -> MixedHodgeStructure:
    """The mixed Hodge structure ``(W^A, F^A)`` of a weakly pseudo-real operator.

    Only for strongly pseudo-real operators is this inverse to
    :func:`operator_from_mhs`.

    Raises:
        NotPseudoReal: ``op`` is not weakly pseudo-real.
        NotReal: the weight filtration is not conjugation-stable (internal error).
    """
    verdict = check_pseudo_real(op, "weak")
    if not verdict.holds:
        raise NotPseudoReal(verdict)
    filt = operator_filtrations(op)
    for n, wn in filt.weight.steps:
        if conj_subspace(wn) != wn:
            raise NotReal(f"W_{n} of a weakly pseudo-real operator is not real")
    report = validate_mhs(filt.weight, filt.hodge)
    return MixedHodgeStructure(filt.weight, filt.hodge, validated=report.ok, report=report)


def conj_correction(op: SigmaOperator, idx: tuple[int, int], x: Sequence[GaussianRational]) -> Vector:
    """The unique ``u'`` in ``D_{p-1,q-1}`` with ``x + u'`` an eigenvector of ``conj A``.

    With ``u = conj(A) x - λ x`` it solves ``(λ - conj A) u' = u`` on the
    invariant subspace ``D_{p-1,q-1}``, where ``λ - conj A`` is invertible.
    """
    idx = LatticeIndex(*idx)
    verdict = check_pseudo_real(op, "strong")
    if not verdict.holds:
        raise NotStronglyPseudoReal(verdict)
    x = tuple(GaussianRational.coerce(c) for c in x)
    eigen = op.spectrum.get(idx, Subspace.zero(op.dim))
    if not eigen.contains_vector(x):
        raise ValueError(f"x is not in the eigenspace I^{tuple(idx)}")
    lam = lattice_embed(idx)
    abar = op.matrix.conj()
    ax = abar.apply(x)
    u = tuple(a - lam * c for a, c in zip(ax, x))
    lower = _bifiltration(op, idx.p - 1, idx.q - 1)
    if not lower.contains_vector(u):
        raise SingularRestriction("conj(A)x - λx left D_{p-1,q-1} although A is strongly pseudo-real")
    if lower.is_zero():
        return tuple(ZERO for _ in x)
    # matrix of conj(A) restricted to D_{p-1,q-1}, in the canonical basis of that subspace
    restricted = Matrix.from_columns([lower.coordinates(abar.apply(v)) for v in lower.vectors], lower.dim)
    system = Matrix.identity(lower.dim).scale(lam) - restricted
    try:
        coeffs = solve(system, lower.coordinates(u))
    except SingularMatrix as exc:
        raise SingularRestriction("λ - conj(A) is singular on D_{p-1,q-1}") from exc
    u_prime = lower.combination(coeffs)
    shifted = tuple(a + b for a, b in zip(x, u_prime))
    assert conj_subspace(op.spectrum.get(idx.swapped(), Subspace.zero(op.dim))).contains_vector(shifted)
    return u_prime


def pseudo_reality_by_blocks(op: SigmaOperator, mode: Mode) -> PseudoRealityVerdict:
    """Same verdict as :func:`check_pseudo_real`, computed in eigen-coordinates.

    ``B^{-1} (conj A - A) B`` is inspected block by block; used to cross-check
    the projector products.
    """
    b, binv, blocks = op._eigenbasis
    m = binv @ (op.matrix.conj() - op.matrix) @ b
    witnesses = []
    for rs, r0, r1 in blocks:
        for pq, c0, c1 in blocks:
            if not _required(mode, rs, pq):
                continue
            if any(not m[i, j].is_zero() for i in range(r0, r1) for j in range(c0, c1)):
                witnesses.append((rs, pq))
    return PseudoRealityVerdict(mode, not witnesses, tuple(witnesses))


def pseudo_reality_report(op: SigmaOperator) -> ValidationReport:
    report = ValidationReport()
    for mode in ("weak", "strong"):
        report.record(mode, check_pseudo_real(op, mode).holds)
    return report
