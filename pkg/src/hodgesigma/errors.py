"""Exception hierarchy shared by all modules.

Every error raised on purpose by the library derives from :class:`HodgeSigmaError`
so the CLI can map it to the input-error exit code in one place.
"""

from __future__ import annotations


class HodgeSigmaError(Exception):
    """Base class for library errors."""


class DimensionMismatch(HodgeSigmaError, ValueError):
    pass


class NotInLattice(HodgeSigmaError, ValueError):
    """The value is not a point of the lattice Z(1-i) + Z(1+i)."""


class SingularMatrix(HodgeSigmaError, ValueError):
    pass


class NotValidated(HodgeSigmaError):
    """An operation needing a validated mixed Hodge structure got an unvalidated one."""


class InvalidMHS(HodgeSigmaError):
    def __init__(self, report):
        self.report = report
        super().__init__("filtrations do not form a mixed Hodge structure: "
                         + "; ".join(report.failures()[:5]))


class NotDirectSum(HodgeSigmaError):
    pass


class NotReal(HodgeSigmaError):
    """A subspace expected to be defined over R is not conjugation-stable."""


class NotRealWeight(NotReal):
    pass


class NotSigmaOperator(HodgeSigmaError):
    """Matrix is not semisimple with spectrum in the lattice.

    ``spectrum`` maps the lattice indices that were found to their eigenspace
    dimensions, ``deficits`` maps lattice indices whose algebraic multiplicity
    exceeds the geometric one to the difference, and ``off_lattice`` counts
    eigenvalues (with multiplicity) outside the lattice.
    """

    def __init__(self, spectrum, deficits, off_lattice, dim):
        self.spectrum = dict(spectrum)
        self.deficits = dict(deficits)
        self.off_lattice = off_lattice
        self.dim = dim
        self.deficit = dim - sum(self.spectrum.values())
        parts = []
        for idx, d in sorted(self.deficits.items()):
            parts.append(f"deficit {d} at λ={_lattice_str(idx)}")
        if off_lattice:
            parts.append(f"{off_lattice} eigenvalue(s) outside the lattice")
        super().__init__("NotSigmaOperator: " + ", ".join(parts))


class NotPseudoReal(HodgeSigmaError):
    def __init__(self, verdict):
        self.verdict = verdict
        super().__init__(
            f"operator is not {verdict.mode}ly pseudo-real; witnesses: "
            + ", ".join(f"{a}->{b}" for a, b in verdict.witnesses[:5]))


class NotStronglyPseudoReal(NotPseudoReal):
    pass


class SingularRestriction(HodgeSigmaError):
    """Internal consistency failure: should be unreachable for valid inputs."""


class TruncationInsufficient(HodgeSigmaError):
    pass


class IllConditioned(HodgeSigmaError):
    pass


class ExhaustedRetries(HodgeSigmaError):
    pass


class SchemaError(HodgeSigmaError, ValueError):
    def __init__(self, message: str, pointer: str = ""):
        self.pointer = pointer
        super().__init__(f"{pointer or '/'}: {message}")


def _lattice_str(idx) -> str:
    p, q = idx
    re, im = p + q, q - p
    if im == 0:
        return str(re)
    sign = "+" if im > 0 else "-"
    mag = "" if abs(im) == 1 else str(abs(im))
    if re == 0:
        return f"{'-' if im < 0 else ''}{mag}i"
    return f"{re}{sign}{mag}i"
