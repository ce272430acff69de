"""The difference operators X, Y, Z and the factorization operator V.

All four act on the (N+1)-dimensional space of functions on the grid
x = 0..N and are materialized as exact (N+1)x(N+1) matrices in two bases:

* Point basis: entry [x][y] is the coefficient of f(y) in (M f)(x).  X and
  Z are lower bidiagonal, Y is tridiagonal, V is lower Hessenberg.
* Phi basis: column n holds the expansion coefficients of M phi_n over the
  rational basis phi_m(x) = (q^-x; q)_m / (A q^-x; q)_m.  Matrices act on
  coefficient vectors (c_0..c_N), so M_point @ Phi = Phi @ M_phi with
  Phi[x][n] = phi_n(x).

phi_{N+1} vanishes identically on the grid, which is what truncates the
raising terms at n = N exactly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence, Union

from . import linalg
from .qcore import (
    DimensionMismatch,
    PoleOnGrid,
    QHahnError,
    QParams,
    ZeroWeight,
    frac_str,
    qnum,
    qpoch,
    qpow,
    scalar,
)
from .reports import CheckReport

__all__ = [
    "Basis",
    "Operator",
    "GridVector",
    "OpMatrix",
    "phi_function",
    "y_shift_coefficients",
    "nu_coefficients",
    "build_operator",
    "build_adjoint_operator",
    "basis_change",
    "weighted_adjoint",
    "verify_factorization",
]


class Basis(enum.Enum):
    POINT = "point"
    PHI = "phi"


class Operator(enum.Enum):
    X = "X"
    Y = "Y"
    Z = "Z"
    V = "V"


@dataclass(frozen=True)
class GridVector:
    """Exact function values (f(0), ..., f(N)) for one parameter instance."""

    values: tuple[Fraction, ...]
    params: QParams

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(scalar(v) for v in self.values))
        if len(self.values) != self.params.N + 1:
            raise DimensionMismatch(
                f"expected {self.params.N + 1} values, got {len(self.values)}"
            )

    def __len__(self) -> int:
        return len(self.values)

    def __getitem__(self, x: int) -> Fraction:
        return self.values[x]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __add__(self, other: "GridVector") -> "GridVector":
        self._compat(other)
        return GridVector(tuple(a + b for a, b in zip(self, other)), self.params)

    def __sub__(self, other: "GridVector") -> "GridVector":
        self._compat(other)
        return GridVector(tuple(a - b for a, b in zip(self, other)), self.params)

    def __rmul__(self, c) -> "GridVector":
        c = scalar(c)
        return GridVector(tuple(c * v for v in self.values), self.params)

    def __neg__(self) -> "GridVector":
        return GridVector(tuple(-v for v in self.values), self.params)

    def is_zero(self) -> bool:
        return all(v == 0 for v in self.values)

    def _compat(self, other: "GridVector") -> None:
        if len(self) != len(other):
            raise DimensionMismatch("grid sizes differ")


MatrixLike = Sequence[Sequence[Fraction]]


@dataclass(frozen=True)
class OpMatrix:
    """Immutable exact matrix tagged with its basis and parameter instance."""

    entries: tuple[tuple[Fraction, ...], ...]
    basis: Basis
    params: QParams

    def __post_init__(self):
        n1 = self.params.N + 1
        rows = tuple(tuple(scalar(v) for v in row) for row in self.entries)
        object.__setattr__(self, "entries", rows)
        if len(rows) != n1 or any(len(r) != n1 for r in rows):
            raise DimensionMismatch(f"operator matrix must be {n1}x{n1}")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> tuple[Fraction, ...]:
        return self.entries[i]

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def _compat(self, other: "OpMatrix") -> None:
        if self.basis is not other.basis or self.params != other.params:
            raise DimensionMismatch("operands live in different bases or instances")

    def __matmul__(self, other: Union["OpMatrix", GridVector]):
        if isinstance(other, OpMatrix):
            self._compat(other)
            return OpMatrix(linalg.mat_mul(self.entries, other.entries), self.basis, self.params)
        if isinstance(other, GridVector):
            return GridVector(tuple(linalg.mat_vec(self.entries, other.values)), self.params)
        return NotImplemented

    def __add__(self, other: "OpMatrix") -> "OpMatrix":
        self._compat(other)
        return OpMatrix(linalg.mat_add(self.entries, other.entries), self.basis, self.params)

    def __sub__(self, other: "OpMatrix") -> "OpMatrix":
        self._compat(other)
        return OpMatrix(linalg.mat_sub(self.entries, other.entries), self.basis, self.params)

    def __neg__(self) -> "OpMatrix":
        return OpMatrix(linalg.mat_scale(Fraction(-1), self.entries), self.basis, self.params)

    def __rmul__(self, c) -> "OpMatrix":
        return OpMatrix(linalg.mat_scale(scalar(c), self.entries), self.basis, self.params)

    def transpose(self) -> "OpMatrix":
        return OpMatrix(linalg.transpose(self.entries), self.basis, self.params)

    def is_zero(self) -> bool:
        return linalg.is_zero(self.entries)

    def max_abs(self) -> Fraction:
        return linalg.max_abs(self.entries)


def identity_matrix(p: QParams, basis: Basis = Basis.POINT) -> OpMatrix:
    return OpMatrix(linalg.identity(p.N + 1), basis, p)


def phi_function(p: QParams, n: int, x: int) -> Fraction:
    """phi_n(x) = (q^-x; q)_n / (A q^-x; q)_n, exact; PoleOnGrid on a zero denominator."""
    den = qpoch(p.A * p.q**-x, n, p.q)
    if den == 0:
        raise PoleOnGrid(f"phi_{n}({x}) has a vanishing denominator (A is a grid power of q)")
    return qpoch(p.q**-x, n, p.q) / den


def y_shift_coefficients(p: QParams, x: int) -> tuple[Fraction, Fraction, Fraction]:
    """Coefficients (up, stay, down) of f(x+1), f(x), f(x-1) in (Y f)(x).

    up vanishes at x = N and down vanishes at x = 0, so Y never reaches
    outside the grid.
    """
    up = qpow(p, -x, 0, 1) * qnum(p, x - p.N) * qnum(p, x + 1, -1) * qnum(p, x, -1)
    down = qpow(p, -x) * qnum(p, x) * qnum(p, x - p.N, -1, 1) * qnum(p, x, -1)
    return up, -(up + down), down


def nu_coefficients(p: QParams, n: int) -> tuple[Fraction, Fraction, Fraction]:
    """Expansion coefficients of Y phi_n over (phi_{n+1}, phi_n, phi_{n-1})."""
    nu1 = -qnum(p, -n) * qnum(p, n) * qnum(p, n - p.N, 0, 1)
    nu2 = qnum(p, -n) * qnum(p, n - p.N, 0, 1) * qnum(p, n, -1) + qpow(p, 0, -1, 1) * qnum(
        p, n
    ) * qnum(p, n - p.N - 1) * qnum(p, 1 - n)
    nu3 = -qpow(p, 0, -2, 1) * qnum(p, n) * qnum(p, n - p.N - 1) * qnum(p, 1 - n, 1)
    return nu1, nu2, nu3


def _x_point(p: QParams) -> list[list[Fraction]]:
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for x in range(n1):
        m[x][x] = qnum(p, x, -1)
        if x > 0:
            m[x][x - 1] = -qpow(p, 0, -1) * qnum(p, x)
    return m


def _y_point(p: QParams) -> list[list[Fraction]]:
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for x in range(n1):
        up, stay, down = y_shift_coefficients(p, x)
        if x < p.N:
            m[x][x + 1] = up
        m[x][x] = stay
        if x > 0:
            m[x][x - 1] = down
    return m


def _z_point(p: QParams) -> list[list[Fraction]]:
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for x in range(n1):
        m[x][x] = Fraction(-1)
        if x > 0:
            m[x][x - 1] = qnum(p, -x) / qnum(p, -x, 1)
    return m


def _v_point(p: QParams) -> list[list[Fraction]]:
    # Lower Hessenberg: one raising term, a multiplicative term, and a full
    # lowering tail whose k-th coefficient is proportional to phi_k(x).
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for x in range(n1):
        up = qpow(p, -x, 0, 1) * qnum(p, x - p.N) * qnum(p, x + 1, -1)
        if x < p.N:
            m[x][x + 1] = up
        m[x][x] = (
            qpow(p, 1 - x, -1, 1) * qnum(p, x) * qnum(p, x - p.N - 1)
            - up
            - qpow(p, -x) * qnum(p, x) * qnum(p, x - p.N, -1, 1)
        )
        tail = qpow(p, 1 - x, -1, 1) * qnum(p, -1, 1, -1) * qnum(p, -1, 1)
        for k in range(1, x + 1):
            m[x][x - k] = tail * p.q**k * phi_function(p, k, x)
    return m


def _x_phi(p: QParams) -> list[list[Fraction]]:
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for n in range(n1):
        m[n][n] = qnum(p, n, -1)
        if n < p.N:
            m[n + 1][n] = -qnum(p, n)
    return m


def _y_phi(p: QParams) -> list[list[Fraction]]:
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for n in range(n1):
        nu1, nu2, nu3 = nu_coefficients(p, n)
        if n < p.N:
            m[n + 1][n] = nu1
        m[n][n] = nu2
        if n > 0:
            m[n - 1][n] = nu3
    return m


def _z_phi(p: QParams) -> list[list[Fraction]]:
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for n in range(n1):
        m[n][n] = Fraction(-1)
        if n < p.N:
            m[n + 1][n] = Fraction(1)
    return m


def _v_phi(p: QParams) -> list[list[Fraction]]:
    n1 = p.N + 1
    m = linalg.zeros(n1, n1)
    for n in range(n1):
        m[n][n] = qnum(p, -n) * qnum(p, n - p.N, 0, 1)
        if n > 0:
            m[n - 1][n] = qpow(p, 1 - n, -1, 1) * qnum(p, n) * qnum(p, n - p.N - 1)
    return m


_BUILDERS = {
    (Operator.X, Basis.POINT): _x_point,
    (Operator.Y, Basis.POINT): _y_point,
    (Operator.Z, Basis.POINT): _z_point,
    (Operator.V, Basis.POINT): _v_point,
    (Operator.X, Basis.PHI): _x_phi,
    (Operator.Y, Basis.PHI): _y_phi,
    (Operator.Z, Basis.PHI): _z_phi,
    (Operator.V, Basis.PHI): _v_phi,
}


def build_operator(which: Operator, basis: Basis, p: QParams) -> OpMatrix:
    """Exact matrix of one of the four operators in the requested basis."""
    return OpMatrix(_BUILDERS[(which, basis)](p), basis, p)


def basis_change(p: QParams, n_max: int | None = None) -> OpMatrix:
    """Matrix Phi with Phi[x][n] = phi_n(x), connecting the two bases.

    Raises PoleOnGrid when A = q^m for m in [-(n_max-1), N], which puts a
    denominator zero of some phi_n on the grid.
    """
    n_max = p.N if n_max is None else n_max
    rep = p.validate(n_max)
    if rep.basis_pole is not None:
        raise PoleOnGrid(rep.basis_pole)
    n1 = p.N + 1
    m = [[phi_function(p, n, x) for n in range(n1)] for x in range(n1)]
    return OpMatrix(m, Basis.POINT, p)


def weighted_adjoint(m: OpMatrix, w: GridVector) -> OpMatrix:
    """Adjoint with respect to the weighted pairing: W^-1 M^T W."""
    if m.basis is not Basis.POINT:
        raise DimensionMismatch("weighted adjoints are defined in the point basis")
    if any(v == 0 for v in w):
        raise ZeroWeight("weight vector has a zero entry")
    n1 = m.n
    out = linalg.zeros(n1, n1)
    for r in range(n1):
        for c in range(n1):
            out[r][c] = w[c] * m[c][r] / w[r]
    return OpMatrix(out, Basis.POINT, m.params)


def build_adjoint_operator(which: Operator, p: QParams) -> OpMatrix:
    """Closed-form point-basis adjoints of X, Y, Z (used as test oracles)."""
    n1 = p.N + 1
    N = p.N
    m = linalg.zeros(n1, n1)
    if which is Operator.X:
        for x in range(n1):
            m[x][x] = qnum(p, x, -1)
            if x < N:
                m[x][x + 1] = (
                    -qpow(p, 1, -1, 1)
                    * qnum(p, x - N)
                    * qnum(p, x + 1, -1)
                    / qnum(p, x - N + 2, -1, 1)
                )
    elif which is Operator.Z:
        for x in range(n1):
            m[x][x] = Fraction(-1)
            if x < N:
                m[x][x + 1] = qpow(p, 1, -1, 1) * qnum(p, x - N) / qnum(p, x - N + 2, -1, 1)
    elif which is Operator.Y:
        for x in range(n1):
            _, stay, _ = y_shift_coefficients(p, x)
            m[x][x] = stay
            if x > 0:
                up_prev, _, _ = y_shift_coefficients(p, x - 1)
                m[x][x - 1] = (
                    qpow(p, -1, 0, -1)
                    * qnum(p, x)
                    * qnum(p, x - N + 1, -1, 1)
                    / (qnum(p, x - N - 1) * qnum(p, x, -1))
                    * up_prev
                )
            if x < N:
                _, _, down_next = y_shift_coefficients(p, x + 1)
                m[x][x + 1] = (
                    qpow(p, 1, 0, 1)
                    * qnum(p, x - N)
                    * qnum(p, x + 1, -1)
                    / (qnum(p, x + 1) * qnum(p, x - N + 2, -1, 1))
                    * down_next
                )
    else:
        raise QHahnError("no closed-form adjoint is provided for V")
    return OpMatrix(m, Basis.POINT, p)


def verify_factorization(p: QParams) -> CheckReport:
    """Check Y = X V exactly in both bases, plus a forward-substitution oracle.

    The oracle recomputes V in the point basis as the bidiagonal solve
    X W = Y and compares W with the constructed V entry by entry.
    """
    report = CheckReport(check="factorization", params=p.as_dict())
    for basis in (Basis.POINT, Basis.PHI):
        x = build_operator(Operator.X, basis, p)
        y = build_operator(Operator.Y, basis, p)
        v = build_operator(Operator.V, basis, p)
        resid = (x @ v) - y
        report.details[f"{basis.value}_residual"] = frac_str(resid.max_abs())
        if not resid.is_zero():
            report.add_violation(basis=basis.value, residual=frac_str(resid.max_abs()))
    x_pt = build_operator(Operator.X, Basis.POINT, p)
    y_pt = build_operator(Operator.Y, Basis.POINT, p)
    v_pt = build_operator(Operator.V, Basis.POINT, p)
    solved = linalg.solve_lower_triangular(x_pt.rows(), y_pt.rows())
    forward_ok = solved == v_pt.rows()
    report.details["forward_solve_matches"] = forward_ok
    if not forward_ok:
        report.add_violation(basis="point", residual="forward substitution mismatch")
    return report
