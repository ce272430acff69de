"""Biorthogonal rational functions of q-Hahn type.

The family U_0..U_N on the grid x = 0..N solves the generalized eigenvalue
problem Y U_n = lambda_n X U_n with lambda_n = [-n]_q [n+beta-N]_q.  Each
U_n is degree-n rational in the q-bracket variable with poles at the fixed
locations [x-alpha-k]_q = 0, and is computed here along two independent
routes (a terminating basic hypergeometric sum, and the three-term
coefficient recurrence over the rational basis phi_k).

The biorthogonal partner family is a parameter reflection of the same
family: partner_m(x) = -q^{-1} [alpha-beta-1]_q * U_m(N-x) evaluated at
(q, A, B) -> (1/q, A/(B q^2), 1/B).  Against the normalized weight w the
two families pair diagonally: (U_n, partner_m)_w = delta_{nm} H_n.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from . import linalg
from .operators import (
    Basis,
    GridVector,
    Operator,
    build_operator,
    phi_function,
    weighted_adjoint,
)
from .qcore import (
    InvalidParams,
    QHahnError,
    QParams,
    ZeroDenominator,
    frac_str,
    phi_series,
    qnum,
    qpoch,
    qpow,
)
from .reports import CheckReport

__all__ = [
    "eigenvalue",
    "WeightVector",
    "weight_vector",
    "weight_scale",
    "reflected_params",
    "u_prefactor",
    "partner_scale",
    "partner_prefactor",
    "phi_expansion",
    "brf_u",
    "brf_partner",
    "BRFFamily",
    "brf_family",
    "partner_family",
    "inner_product",
    "norm_h",
    "partial_fraction",
    "check_weight",
    "check_biorthogonality",
    "check_partner",
    "check_partial_fractions",
]

Method = Literal["hypergeometric", "recurrence"]


def eigenvalue(n: int, p: QParams) -> Fraction:
    """lambda_n = [-n]_q [n + beta - N]_q."""
    return qnum(p, -n) * qnum(p, n - p.N, 0, 1)


@dataclass(frozen=True)
class WeightVector:
    """Normalized grid weight; construction verifies sum(w) = 1 exactly."""

    vector: GridVector

    @property
    def params(self) -> QParams:
        return self.vector.params

    def __len__(self) -> int:
        return len(self.vector)

    def __getitem__(self, x: int) -> Fraction:
        return self.vector[x]

    def __iter__(self):
        return iter(self.vector)


def weight_scale(p: QParams) -> Fraction:
    """x-independent factor that normalizes the bare weight to total 1."""
    den = qpoch(qpow(p, 0, 0, -1), p.N, p.q)
    if den == 0:
        raise ZeroDenominator("(1/B; q)_N vanishes in the weight normalization")
    return qpow(p, p.N, -p.N) * qpoch(qpow(p, -1, 1, -1), p.N, p.q) / den


def _bare_weight(p: QParams) -> list[Fraction]:
    # (q B)^x (q^-N; q)_x (q/A; q)_x / ((q; q)_x (q^{2-N} B/A; q)_x)
    out = []
    for x in range(p.N + 1):
        den = qpoch(p.q, x, p.q) * qpoch(qpow(p, 2 - p.N, -1, 1), x, p.q)
        if den == 0:
            raise ZeroDenominator(f"weight denominator vanishes at x = {x}")
        num = qpow(p, x, 0, x) * qpoch(qpow(p, -p.N), x, p.q) * qpoch(qpow(p, 1, -1), x, p.q)
        out.append(num / den)
    return out


def weight_vector(p: QParams) -> WeightVector:
    """Normalized biorthogonality weight on the grid; sum is exactly 1."""
    c = weight_scale(p)
    w = [c * b for b in _bare_weight(p)]
    total = sum(w)
    if total != 1:
        raise QHahnError(f"weight normalization failed: sum = {total}")
    return WeightVector(GridVector(tuple(w), p))


def reflected_params(p: QParams) -> QParams:
    """Parameter reflection (q, A, B) -> (1/q, A/(B q^2), 1/B); N fixed.

    In exponent terms this is alpha -> beta - alpha + 2, beta -> beta under
    q -> 1/q.  Applying it twice returns the original instance.
    """
    return QParams(1 / p.q, p.A / (p.B * p.q**2), 1 / p.B, p.N)


def u_prefactor(n: int, p: QParams) -> Fraction:
    """(q^-N; q)_n / (q^{-n-beta}; q)_n, the normalization making U_n(x) -> 1."""
    den = qpoch(qpow(p, -n, 0, -1), n, p.q)
    if den == 0:
        raise ZeroDenominator("(q^{-n}/B; q)_n vanishes in the U_n prefactor")
    return qpoch(qpow(p, -p.N), n, p.q) / den


def partner_scale(p: QParams) -> Fraction:
    """-q^-1 [alpha - beta - 1]_q, the constant in front of the partner family."""
    return -qpow(p, -1) * qnum(p, -1, 1, -1)


def partner_prefactor(n: int, p: QParams) -> Fraction:
    """u_prefactor evaluated at the reflected parameter instance."""
    return u_prefactor(n, reflected_params(p))


def phi_expansion(n: int, p: QParams) -> tuple[Fraction, ...]:
    """Coefficients C_{n,0..n} of U_n over the rational basis phi_k.

    C_{n,0} is the prefactor and the rest follow the two-term recurrence
    C_{n,k+1} = (lambda_n - lambda_k) / (q^{beta-alpha-k} [k+1]_q [k-N]_q) C_{n,k}.
    """
    if n > p.N:
        raise InvalidParams(f"family index n = {n} exceeds N = {p.N}")
    coeffs = [u_prefactor(n, p)]
    lam_n = eigenvalue(n, p)
    for k in range(n):
        step = qpow(p, -k, -1, 1) * qnum(p, k + 1) * qnum(p, k - p.N)
        coeffs.append((lam_n - eigenvalue(k, p)) / step * coeffs[-1])
    return tuple(coeffs)


def _u_values_hypergeometric(n: int, p: QParams) -> list[Fraction]:
    pref = u_prefactor(n, p)
    vals = []
    for x in range(p.N + 1):
        s = phi_series(
            num=[qpow(p, -n), qpow(p, n - p.N, 0, 1), qpow(p, -x)],
            den=[qpow(p, -p.N), qpow(p, -x, 1)],
            z=p.A / p.B,
            q=p.q,
            terms=n + 1,
        )
        vals.append(pref * s)
    return vals


def _u_values_recurrence(n: int, p: QParams) -> list[Fraction]:
    coeffs = phi_expansion(n, p)
    vals = []
    for x in range(p.N + 1):
        vals.append(sum(c * phi_function(p, k, x) for k, c in enumerate(coeffs)))
    return vals


def brf_u(n: int, p: QParams, method: Method = "hypergeometric") -> GridVector:
    """Grid values of U_n, computed by the requested route."""
    if n > p.N or n < 0:
        raise InvalidParams(f"family index n = {n} must lie in 0..N = {p.N}")
    if method == "hypergeometric":
        vals = _u_values_hypergeometric(n, p)
    elif method == "recurrence":
        vals = _u_values_recurrence(n, p)
    else:
        raise ValueError(f"unknown method {method!r}")
    return GridVector(tuple(vals), p)


def brf_partner(m: int, p: QParams, method: Method = "hypergeometric") -> GridVector:
    """Grid values of the biorthogonal partner family member m."""
    refl = reflected_params(p)
    base = brf_u(m, refl, method=method)
    c = partner_scale(p)
    return GridVector(tuple(c * base[p.N - x] for x in range(p.N + 1)), p)


@dataclass(frozen=True)
class BRFFamily:
    """All members U_0..U_N with their eigenvalues, for one instance."""

    params: QParams
    members: tuple[GridVector, ...]
    lambdas: tuple[Fraction, ...]


def brf_family(p: QParams, method: Method = "hypergeometric") -> BRFFamily:
    members = tuple(brf_u(n, p, method=method) for n in range(p.N + 1))
    lambdas = tuple(eigenvalue(n, p) for n in range(p.N + 1))
    return BRFFamily(params=p, members=members, lambdas=lambdas)


def partner_family(p: QParams, method: Method = "hypergeometric") -> tuple[GridVector, ...]:
    return tuple(brf_partner(m, p, method=method) for m in range(p.N + 1))


def inner_product(f: GridVector, g: GridVector, w: WeightVector) -> Fraction:
    """(f, g)_w = sum_x w_x f(x) g(x), exactly."""
    if len(f) != len(g) or len(f) != len(w):
        raise QHahnError("inner product operands live on different grids")
    return sum(w[x] * f[x] * g[x] for x in range(len(f)))


def _hbar(n: int, p: QParams) -> Fraction:
    # q^{N(alpha-1-n)} (q; q)_n (1/B; q)_N / (A/(Bq); q)_N
    # * (qB; q)_n / (q^-N; q)_n * (q^{n-N} B; q)_n / (q^{1-N} B; q)_{2n}
    q = p.q
    for label, den in (
        ("(A/(Bq); q)_N", qpoch(qpow(p, -1, 1, -1), p.N, q)),
        ("(q^-N; q)_n", qpoch(qpow(p, -p.N), n, q)),
        ("(q^{1-N} B; q)_{2n}", qpoch(qpow(p, 1 - p.N, 0, 1), 2 * n, q)),
    ):
        if den == 0:
            raise ZeroDenominator(f"{label} vanishes in the norm closed form")
    out = p.A**p.N * q ** (-p.N * (1 + n))
    out *= qpoch(q, n, q)
    out *= qpoch(qpow(p, 0, 0, -1), p.N, q) / qpoch(qpow(p, -1, 1, -1), p.N, q)
    out *= qpoch(qpow(p, 1, 0, 1), n, q) / qpoch(qpow(p, -p.N), n, q)
    out *= qpoch(qpow(p, n - p.N, 0, 1), n, q) / qpoch(qpow(p, 1 - p.N, 0, 1), 2 * n, q)
    return out


def norm_h(n: int, p: QParams, check: bool = True) -> Fraction:
    """Biorthogonality norm H_n with (U_n, partner_n)_w = H_n.

    The closed form is the assembled product of the partner constant, the
    two series prefactors, the weight normalization and the bare diagonal
    norm.  With check=True the value is verified against the direct sum.
    """
    hn = (
        partner_scale(p)
        * u_prefactor(n, p)
        * partner_prefactor(n, p)
        * weight_scale(p)
        * _hbar(n, p)
    )
    if check:
        w = weight_vector(p)
        direct = inner_product(brf_u(n, p), brf_partner(n, p), w)
        if direct != hn:
            raise QHahnError(
                f"norm closed form disagrees with the direct sum at n = {n}: "
                f"{hn} != {direct}"
            )
    return hn


def partial_fraction(n: int, p: QParams) -> tuple[Fraction, ...]:
    """Residue coefficients eta_{n,0..n-1} with U_n = 1 + sum_k eta_k/[alpha+k-x]_q.

    The basis functions 1/[alpha+k-x]_q carry the n simple poles of U_n and
    vanish in the x -> infinity normalization limit, so the constant term is
    exactly 1.  The n x n system is solved from the first n grid points and
    the expansion is verified on the remaining ones.
    """
    u = brf_u(n, p)
    if n == 0:
        if any(v != 1 for v in u):
            raise QHahnError("U_0 is not identically 1")
        return ()
    rows = [[1 / qnum(p, k - x, 1) for k in range(n)] for x in range(n)]
    rhs = [u[x] - 1 for x in range(n)]
    eta = linalg.solve_unique(rows, rhs)
    for x in range(n, p.N + 1):
        recon = 1 + sum(eta[k] / qnum(p, k - x, 1) for k in range(n))
        if recon != u[x]:
            raise QHahnError(f"partial-fraction expansion of U_{n} fails at x = {x}")
    return tuple(eta)


def check_weight(p: QParams) -> CheckReport:
    """Weight normalization and the reflection symmetry w_x = w'_{N-x}."""
    report = CheckReport(check="weight", params=p.as_dict())
    w = weight_vector(p)
    report.details["total"] = frac_str(sum(Fraction(v) for v in w))
    refl = weight_vector(reflected_params(p))
    for x in range(p.N + 1):
        if w[x] != refl[p.N - x]:
            report.add_violation(x=x, residual=frac_str(w[x] - refl[p.N - x]))
    return report


def check_biorthogonality(p: QParams) -> CheckReport:
    """(U_n, partner_m)_w = delta_{nm} H_n with H_n nonzero, all pairs."""
    report = CheckReport(check="biorthogonality", params=p.as_dict())
    w = weight_vector(p)
    us = brf_family(p).members
    partners = partner_family(p)
    norms = []
    for n in range(p.N + 1):
        for m in range(p.N + 1):
            pairing = inner_product(us[n], partners[m], w)
            if n != m:
                if pairing != 0:
                    report.add_violation(n=n, m=m, residual=frac_str(pairing))
            else:
                if pairing == 0:
                    report.add_violation(n=n, m=m, residual="diagonal norm vanishes")
                closed = norm_h(n, p, check=False)
                if closed != pairing:
                    report.add_violation(n=n, m=m, residual=frac_str(closed - pairing))
                norms.append(frac_str(pairing))
    report.details["norms"] = norms
    return report


def check_partner(p: QParams) -> CheckReport:
    """Adjoint characterization of the partner family.

    For each m the generalized null space of (Y* - lambda_m X*) is
    one-dimensional and X* applied to it is collinear with partner_m;
    moreover V* partner_m = lambda_m partner_m.
    """
    report = CheckReport(check="partner", params=p.as_dict())
    w = weight_vector(p)
    xs = weighted_adjoint(build_operator(Operator.X, Basis.POINT, p), w.vector)
    ys = weighted_adjoint(build_operator(Operator.Y, Basis.POINT, p), w.vector)
    vs = weighted_adjoint(build_operator(Operator.V, Basis.POINT, p), w.vector)
    partners = partner_family(p)
    for m in range(p.N + 1):
        lam = eigenvalue(m, p)
        pm = partners[m]
        resid = (vs @ pm) - lam * pm
        if not resid.is_zero():
            report.add_violation(m=m, kind="eigen", residual=frac_str(max(abs(v) for v in resid)))
        pencil = (ys - lam * xs).rows()
        kernel = linalg.null_space(pencil)
        if len(kernel) != 1:
            report.add_violation(m=m, kind="kernel", residual=f"dimension {len(kernel)}")
            continue
        image = GridVector(tuple(linalg.mat_vec(xs.rows(), kernel[0])), p)
        # collinearity: image = c * partner_m for a single nonzero constant
        ratio = None
        ok = True
        for x in range(p.N + 1):
            if pm[x] == 0:
                ok = ok and image[x] == 0
                continue
            r = image[x] / pm[x]
            if ratio is None:
                ratio = r
            elif r != ratio:
                ok = False
        if not ok or ratio is None or ratio == 0:
            report.add_violation(m=m, kind="collinearity", residual="not proportional")
    return report


def check_partial_fractions(p: QParams) -> CheckReport:
    """Partial-fraction expansion solves and reconstructs for every n."""
    report = CheckReport(check="partial_fractions", params=p.as_dict())
    sizes = []
    for n in range(p.N + 1):
        try:
            eta = partial_fraction(n, p)
        except QHahnError as exc:
            report.add_violation(n=n, residual=str(exc))
            continue
        sizes.append(len(eta))
    report.details["pole_counts"] = sizes
    return report
