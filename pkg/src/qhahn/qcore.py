"""Exact rational arithmetic and q-calculus primitives.

Every quantity in this package is an exact rational number
(`fractions.Fraction`).  The deformation parameters enter only through the
three base values q, A, B, where A and B play the role of the powers
q^alpha and q^beta of two formal exponents alpha, beta; no logarithm is
ever taken.  Exponent expressions of the form q^(i + j*alpha + k*beta)
are described by the integer triple `ExponentSpec(i, j, k)` and evaluated
exactly as q**i * A**j * B**k.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

__all__ = [
    "Scalar",
    "ScalarLike",
    "QHahnError",
    "InvalidParams",
    "ZeroDenominator",
    "PoleOnGrid",
    "ZeroWeight",
    "DimensionMismatch",
    "DegenerateDenominator",
    "SingularSystem",
    "RankDeficient",
    "PrecisionLoss",
    "ConfigError",
    "scalar",
    "frac_str",
    "ExponentSpec",
    "QParams",
    "value",
    "qbracket",
    "qpow",
    "qnum",
    "qpoch",
    "phi_series",
    "ValidationReport",
    "validate_params",
]

Scalar = Fraction
ScalarLike = Union[Fraction, int, str]


class QHahnError(Exception):
    """Base class for all errors raised by this package."""


class InvalidParams(QHahnError):
    """Parameter instance violates a precondition."""


class ZeroDenominator(QHahnError):
    """A denominator q-Pochhammer factor vanishes inside a series."""


class PoleOnGrid(QHahnError):
    """A rational basis function has a pole at a grid point."""


class ZeroWeight(QHahnError):
    """A weight entry vanishes where an inverse is required."""


class DimensionMismatch(QHahnError):
    """Operands live on grids of different sizes."""


class DegenerateDenominator(QHahnError):
    """A recurrence-coefficient denominator bracket vanishes."""


class SingularSystem(QHahnError):
    """An exact linear system has no unique solution."""


class RankDeficient(QHahnError):
    """A coefficient-recovery ansatz does not have full column rank."""


class PrecisionLoss(QHahnError):
    """A floating-point check lost more precision than the effect measured."""


class ConfigError(QHahnError):
    """A panel configuration file is malformed."""


def scalar(x: ScalarLike) -> Fraction:
    """Coerce an int, a "num/den" string, or a Fraction to an exact rational."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int) or isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot interpret {x!r} as an exact rational")


def frac_str(x: Fraction) -> str:
    """Serialize an exact rational as "num/den" (denominator always shown)."""
    return f"{x.numerator}/{x.denominator}"


@dataclass(frozen=True)
class ExponentSpec:
    """Integer triple (i, j, k) standing for the exponent i + j*alpha + k*beta."""

    i: int = 0
    j: int = 0
    k: int = 0


@dataclass(frozen=True)
class QParams:
    """One exact parameter instance (q, A, B, N) on the grid x = 0..N."""

    q: Fraction
    A: Fraction
    B: Fraction
    N: int

    def __post_init__(self):
        object.__setattr__(self, "q", scalar(self.q))
        object.__setattr__(self, "A", scalar(self.A))
        object.__setattr__(self, "B", scalar(self.B))
        if self.q in (Fraction(0), Fraction(1), Fraction(-1)):
            raise InvalidParams(f"q must avoid 0 and +-1, got {self.q}")
        if self.A == 0 or self.B == 0:
            raise InvalidParams("A and B must be nonzero")
        if not isinstance(self.N, int) or isinstance(self.N, bool) or self.N < 0:
            raise InvalidParams(f"N must be a nonnegative integer, got {self.N!r}")

    def validate(self, n_max: int | None = None) -> "ValidationReport":
        return validate_params(self, self.N if n_max is None else n_max)

    def as_dict(self) -> dict:
        return {
            "q": frac_str(self.q),
            "A": frac_str(self.A),
            "B": frac_str(self.B),
            "N": self.N,
        }


def value(e: ExponentSpec, p: QParams) -> Fraction:
    """Evaluate q^i * A^j * B^k exactly."""
    return p.q**e.i * p.A**e.j * p.B**e.k


def qbracket(e: ExponentSpec, p: QParams) -> Fraction:
    """q-number [i + j*alpha + k*beta]_q = (1 - q^i A^j B^k)/(1 - q)."""
    return (1 - value(e, p)) / (1 - p.q)


def qpow(p: QParams, i: int = 0, j: int = 0, k: int = 0) -> Fraction:
    """Shorthand for value(ExponentSpec(i, j, k), p)."""
    return p.q**i * p.A**j * p.B**k


def qnum(p: QParams, i: int = 0, j: int = 0, k: int = 0) -> Fraction:
    """Shorthand for qbracket(ExponentSpec(i, j, k), p)."""
    return (1 - p.q**i * p.A**j * p.B**k) / (1 - p.q)


def qpoch(base: ScalarLike, k: int, q: ScalarLike) -> Fraction:
    """q-Pochhammer (base; q)_k = prod_{j=0}^{k-1} (1 - q^j * base)."""
    if k < 0:
        raise ValueError(f"q-Pochhammer length must be nonnegative, got {k}")
    b, qq = scalar(base), scalar(q)
    out = Fraction(1)
    f = b
    for _ in range(k):
        out *= 1 - f
        f *= qq
    return out


def phi_series(
    num: Sequence[ScalarLike],
    den: Sequence[ScalarLike],
    z: ScalarLike,
    q: ScalarLike,
    terms: int,
) -> Fraction:
    """Truncated basic hypergeometric sum, exactly.

    Returns sum_{k=0}^{terms-1} of
        prod_i (num_i; q)_k / ((q; q)_k * prod_j (den_j; q)_k) * z^k.
    The caller chooses the truncation; for a terminating series a numerator
    entry q^(-n) makes every term beyond k = n vanish, so terms = n + 1 is
    exact.  Raises ZeroDenominator if (q; q)_k or any (den_j; q)_k vanishes
    for some k < terms.
    """
    a = [scalar(v) for v in num]
    b = [scalar(v) for v in den]
    zz, qq = scalar(z), scalar(q)
    total = Fraction(0)
    term = Fraction(1)
    qk = Fraction(1)  # q^k
    for k in range(terms):
        total += term
        if k == terms - 1:
            break
        ratio = zz
        for av in a:
            ratio *= 1 - qk * av
        qk1 = qk * qq
        if qk1 == 1:
            raise ZeroDenominator(f"(q; q)_{k + 1} vanishes (q^{k + 1} = 1)")
        denom = 1 - qk1
        for bv in b:
            f = 1 - qk * bv
            if f == 0:
                raise ZeroDenominator(
                    f"denominator Pochhammer ({bv}; q)_k vanishes at factor index {k}"
                )
            denom *= f
        term = term * ratio / denom
        qk = qk1
    return total


@dataclass(frozen=True)
class ValidationReport:
    """Outcome of the parameter guards; one witness string per triggered flag.

    Flags:
      basis_pole            A equals a power q^m with m in [-(n_max-1), N], so a
                            rational basis function has a pole on the grid.
      weight_denominator    a weight denominator Pochhammer factor vanishes.
      eigenvalue_collision  the eigenvalue list is not pairwise distinct.
      bracket_denominator   a recurrence-coefficient denominator bracket vanishes.
    """

    basis_pole: str | None = None
    weight_denominator: str | None = None
    eigenvalue_collision: str | None = None
    bracket_denominator: str | None = None

    @property
    def valid(self) -> bool:
        return not self.issues()

    def issues(self) -> list[str]:
        found = []
        for name in (
            "basis_pole",
            "weight_denominator",
            "eigenvalue_collision",
            "bracket_denominator",
        ):
            witness = getattr(self, name)
            if witness is not None:
                found.append(f"{name}: {witness}")
        return found


def validate_params(p: QParams, n_max: int) -> ValidationReport:
    """Check a parameter instance against the degeneracy obstructions.

    n_max is the largest family index the caller intends to use (usually N).
    """
    if n_max < 0 or n_max > p.N:
        raise InvalidParams(f"n_max must lie in 0..N = {p.N}, got {n_max}")
    q, A, B, N = p.q, p.A, p.B, p.N

    basis_pole = None
    for m in range(-(n_max - 1), N + 1):
        if A == q**m:
            basis_pole = f"A = q^{m} with {m} in [{-(n_max - 1)}, {N}]"
            break

    weight_denominator = None
    for j in range(1, N + 1):
        if q**j == 1:
            weight_denominator = f"(q; q)_N factor 1 - q^{j} vanishes"
            break
    if weight_denominator is None:
        base = B / A * q ** (2 - N)
        for j in range(N):
            if base * q**j == 1:
                weight_denominator = f"B/A = q^{N - 2 - j} makes a weight denominator vanish"
                break

    eigenvalue_collision = None
    lam = [qnum(p, -n) * qnum(p, n - N, 0, 1) for n in range(n_max + 1)]
    for n in range(len(lam)):
        for m in range(n + 1, len(lam)):
            if lam[n] == lam[m]:
                eigenvalue_collision = f"lambda_{n} = lambda_{m} = {lam[n]}"
                break
        if eigenvalue_collision:
            break

    bracket_denominator = None
    for n in range(n_max + 1):
        checks = [
            (f"[N - beta - 2n]_q at n={n}", qpow(p, N - 2 * n, 0, -1)),
            (f"[2n + 1 + beta - N]_q at n={n}", qpow(p, 2 * n + 1 - N, 0, 1)),
            (f"[2n - 1 + beta - N]_q at n={n}", qpow(p, 2 * n - 1 - N, 0, 1)),
            (f"[N - beta - 2n + 1]_q at n={n}", qpow(p, N - 2 * n + 1, 0, -1)),
        ]
        for label, val in checks:
            if val == 1:
                bracket_denominator = f"{label} vanishes"
                break
        if bracket_denominator:
            break

    return ValidationReport(
        basis_pole=basis_pole,
        weight_denominator=weight_denominator,
        eigenvalue_collision=eigenvalue_collision,
        bracket_denominator=bracket_denominator,
    )
