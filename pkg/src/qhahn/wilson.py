"""Terminating very-well-poised 10phi9 biorthogonal family and its limits.

The family u_n, v_n is biorthogonal on x = 0..N against the weight w_x,
with diagonal norms h_n; all four quantities are evaluated in exact
rational arithmetic.  The half-exponent parameter pair of the
very-well-poised series never materializes on its own: the four factors
are combined per term into (1 - (qa/qe) q^{2k}) / (1 - qa/qe), which is
rational in the stored parameters.

Two degenerations are verified.  Sending qa -> infinity along qa = q^{-m}
(|q| < 1) collapses the family onto the rational functions of the brf
module; the limit targets (barred weight, series, norms) are implemented
here from their own displays and compared with exact deviations that must
decay geometrically in m.  Sending q -> 1 with integer exponents yields
an ordinary hypergeometric family (Hahn type) whose biorthogonality is
checked exactly, with a floating-point convergence certificate for the
q -> 1 approach itself.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import mpmath

from .qcore import (
    InvalidParams,
    PrecisionLoss,
    QParams,
    ZeroDenominator,
    frac_str,
    scalar,
)
from .reports import CheckReport

__all__ = [
    "WilsonParams",
    "wilson_weight",
    "wilson_u",
    "wilson_v",
    "wilson_h",
    "check_wilson_biorthogonality",
    "limit_weight",
    "limit_u",
    "limit_v",
    "limit_h",
    "induced_wilson_params",
    "wilson_limit_check",
    "HahnParams",
    "hahn_weight",
    "hahn_u",
    "hahn_U",
    "hahn_v",
    "hahn_h",
    "check_hahn_biorthogonality",
    "qto1_convergence_check",
]


def _poch(base, k: int, q):
    """(base; q)_k as a plain product; works over any field.

    The accumulator starts from q**0 so the result lives in q's field even
    for k = 0 (an int 1 would later trigger float division on int/int).
    """
    out = q**0
    for j in range(k):
        out = out * (1 - base * q**j)
    return out


@dataclass(frozen=True)
class WilsonParams:
    """Free parameters (q, qa, qc, qd, qe, N); qb and qf are derived.

    The products qa*qb = q^{-N} and qa*qb*qc*qd*qe*qf = q hold by
    construction.  Validation scans every denominator factor appearing in
    the weight, the two series, and the norms for x, n <= N.
    """

    q: Fraction
    qa: Fraction
    qc: Fraction
    qd: Fraction
    qe: Fraction
    N: int

    def __post_init__(self):
        for name in ("q", "qa", "qc", "qd", "qe"):
            object.__setattr__(self, name, scalar(getattr(self, name)))
        if not (isinstance(self.N, int) and self.N >= 0):
            raise InvalidParams("N must be a nonnegative integer")
        if self.q == 0 or self.q == 1 or self.q == -1:
            raise InvalidParams("q must avoid 0, 1, -1")
        if 0 in (self.qa, self.qc, self.qd, self.qe):
            raise InvalidParams("parameter values must be nonzero")
        _validate_denominators(self)

    @property
    def qb(self) -> Fraction:
        return self.q ** (-self.N) / self.qa

    @property
    def qf(self) -> Fraction:
        return self.q ** (self.N + 1) / (self.qc * self.qd * self.qe)

    def swapped(self) -> "WilsonParams":
        """Partner parameters: qa <-> qb and qe <-> qf (the derived pair
        swaps back automatically through the constraints)."""
        return WilsonParams(self.q, self.qb, self.qc, self.qd, self.qf, self.N)

    def as_dict(self) -> dict:
        return {
            "q": frac_str(self.q), "qa": frac_str(self.qa), "qc": frac_str(self.qc),
            "qd": frac_str(self.qd), "qe": frac_str(self.qe), "N": self.N,
        }


def _u_bases(q, qa, qb, qc, qd, qe, qf, n: int, qz):
    num = [
        q ** (-n), qa / qe, q / (qc * qe), q / (qd * qe),
        q / (qe * qb), q**n / (qe * qf), qa * qa * qz, 1 / qz,
    ]
    den = [
        qa * qb, qa * qc, qa * qd, q ** (n + 1) * qa / qe,
        q ** (1 - n) * qa * qf, q / (qe * qa * qz), q * qz * qa / qe,
    ]
    return num, den


def _weight_pairs(q, qa, qb, qc, qd, qe, qf):
    return [(qa * s, q * qa / s) for s in (qb, qc, qd, qe, qf)]


def _h_den_bases(q, qa, qb, qc, qd, qe, qf):
    return [qb * qf, q * qa / qc, q * qa / qd, q * qa / qe]


def _validate_denominators(wp: WilsonParams) -> None:
    q = wp.q
    if wp.qa * wp.qa == 1:
        raise InvalidParams("weight head 1 - qa^2 vanishes")
    for _, den_base in _weight_pairs(q, wp.qa, wp.qb, wp.qc, wp.qd, wp.qe, wp.qf):
        for j in range(wp.N):
            if den_base * q**j == 1:
                raise InvalidParams(f"weight denominator vanishes at x={j + 1}")
    # series denominators are needed for both the family and its partner
    for qa, qb, qe, qf, grid_shift in (
            (wp.qa, wp.qb, wp.qe, wp.qf, Fraction(1)),
            (wp.qb, wp.qa, wp.qf, wp.qe, wp.qa / wp.qb)):
        if qa == qe:
            raise InvalidParams("very-well-poised head 1 - qa/qe vanishes")
        for n in range(wp.N + 1):
            for x in range(wp.N + 1):
                _, den = _u_bases(q, qa, qb, wp.qc, wp.qd, qe, qf, n, q**x * grid_shift)
                for base in den:
                    for j in range(n):
                        if base * q**j == 1:
                            raise InvalidParams(
                                f"series denominator vanishes at n={n}, x={x}, k={j + 1}")
    qa, qb, qc, qd, qe, qf = wp.qa, wp.qb, wp.qc, wp.qd, wp.qe, wp.qf
    for base in _h_den_bases(q, qa, qb, qc, qd, qe, qf):
        for j in range(wp.N):
            if base * q**j == 1:
                raise InvalidParams("norm denominator vanishes")
    for n in range(wp.N + 1):
        for base, length in ((q / (qe * qf), 2 * n), (qa * qb, n),
                             (1 / (qb * qe), n), (1 / (qa * qf), n)):
            for j in range(length):
                if base * q**j == 1:
                    raise InvalidParams("norm denominator vanishes")


def wilson_weight(x: int, wp: WilsonParams) -> Fraction:
    q, qa = wp.q, wp.qa
    head_den = _poch(q, x, q) * (1 - qa * qa)
    if head_den == 0:
        raise ZeroDenominator("weight head denominator vanishes")
    out = q**x * _poch(qa * qa, x, q) * (1 - qa * qa * q ** (2 * x)) / head_den
    for num_base, den_base in _weight_pairs(q, qa, wp.qb, wp.qc, wp.qd, wp.qe, wp.qf):
        den = _poch(den_base, x, q)
        if den == 0:
            raise ZeroDenominator("weight denominator vanishes")
        out = out * _poch(num_base, x, q) / den
    return out


def _u_value(q, qa, qb, qc, qd, qe, qf, n: int, qz):
    head = qa / qe
    head_den = 1 - head
    if head_den == 0:
        raise ZeroDenominator("very-well-poised head vanishes")
    num_bases, den_bases = _u_bases(q, qa, qb, qc, qd, qe, qf, n, qz)
    total = q * 0
    for k in range(n + 1):
        den = _poch(q, k, q)
        for base in den_bases:
            den = den * _poch(base, k, q)
        if den == 0:
            raise ZeroDenominator(f"series denominator vanishes at k={k}")
        num = (1 - head * q ** (2 * k)) / head_den * q**k
        for base in num_bases:
            num = num * _poch(base, k, q)
        total = total + num / den
    return total


def wilson_u(n: int, x: int, wp: WilsonParams) -> Fraction:
    return _u_value(wp.q, wp.qa, wp.qb, wp.qc, wp.qd, wp.qe, wp.qf, n, wp.q**x)


def wilson_v(n: int, x: int, wp: WilsonParams) -> Fraction:
    """Partner series: parameter roles a <-> b and e <-> f swap, but the
    grid stays anchored to the original head, so the series variable
    (an offset from the swapped head) picks up qa/qb."""
    return _u_value(wp.q, wp.qb, wp.qa, wp.qc, wp.qd, wp.qf, wp.qe, n,
                    wp.q**x * wp.qa / wp.qb)


def wilson_h(n: int, wp: WilsonParams, *, include_qn: bool = True,
             squared_head: bool = True, anchored_tail: bool = True) -> Fraction:
    """Diagonal norm.  The keyword knobs revert corrections and exist only
    so tests can certify each of them: include_qn=False drops the q^{-n}
    factor, squared_head=False replaces the (q*qa^2; q)_N head with
    (q*qa; q)_N, and anchored_tail=False replaces the (q*qa/qe; q)_n tail
    factor with (q*qc/qe; q)_n.  Each reversion breaks at least one
    diagonal identity on a generic instance.
    """
    q, qa, qb, qc, qd, qe, qf = wp.q, wp.qa, wp.qb, wp.qc, wp.qd, wp.qe, wp.qf
    N = wp.N
    head_base = q * qa * qa if squared_head else q * qa
    tail_anchor = q * qa / qe if anchored_tail else q * qc / qe
    num = (
        _poch(head_base, N, q) * _poch(q / (qc * qd), N, q)
        * _poch(q / (qc * qe), N, q) * _poch(q / (qd * qe), N, q)
    )
    den = 1
    for base in _h_den_bases(q, qa, qb, qc, qd, qe, qf):
        den = den * _poch(base, N, q)
    tail_num = (
        _poch(q, n, q) * _poch(q**n / (qe * qf), n, q)
        * _poch(qc * qd, n, q) * _poch(tail_anchor, n, q) * _poch(q * qb / qf, n, q)
    )
    tail_den = (
        _poch(q / (qe * qf), 2 * n, q) * _poch(qa * qb, n, q)
        * _poch(1 / (qb * qe), n, q) * _poch(1 / (qa * qf), n, q)
    )
    if den == 0 or tail_den == 0:
        raise ZeroDenominator("norm denominator vanishes")
    out = num / den * tail_num / tail_den
    if include_qn:
        out = out * q ** (-n)
    return out


def check_wilson_biorthogonality(wp: WilsonParams, *, include_qn: bool = True,
                                 squared_head: bool = True,
                                 anchored_tail: bool = True) -> CheckReport:
    """Sum_x w_x u_n v_m = delta_{nm} h_n, all pairs, exact."""
    report = CheckReport(check="wilson_biorthogonality", params=wp.as_dict())
    weights = [wilson_weight(x, wp) for x in range(wp.N + 1)]
    us = [[wilson_u(n, x, wp) for x in range(wp.N + 1)] for n in range(wp.N + 1)]
    vs = [[wilson_v(m, x, wp) for x in range(wp.N + 1)] for m in range(wp.N + 1)]
    norms = []
    for n in range(wp.N + 1):
        hn = wilson_h(n, wp, include_qn=include_qn, squared_head=squared_head,
                      anchored_tail=anchored_tail)
        norms.append(frac_str(hn))
        if hn == 0:
            report.add_violation(n=n, residual="diagonal norm vanishes")
        for m in range(wp.N + 1):
            total = sum((weights[x] * us[n][x] * vs[m][x] for x in range(wp.N + 1)),
                        Fraction(0))
            expected = hn if n == m else Fraction(0)
            if total != expected:
                report.add_violation(n=n, m=m, residual=frac_str(total - expected))
    report.details["norms"] = norms
    return report


def limit_weight(x: int, q, A, B, N: int):
    """Weight limit target; works over Fraction or floating operands."""
    den = _poch(q, x, q) * _poch(q**(2 - N) * B / A, x, q)
    if den == 0:
        raise ZeroDenominator("limit weight denominator vanishes")
    return (q * B) ** x * _poch(q ** (-N), x, q) * _poch(q / A, x, q) / den


def _phi32(num_bases, den_bases, z, q, terms: int):
    total = 0
    for k in range(terms):
        den = _poch(q, k, q)
        for base in den_bases:
            den = den * _poch(base, k, q)
        if den == 0:
            raise ZeroDenominator(f"series denominator vanishes at k={k}")
        num = z**k
        for base in num_bases:
            num = num * _poch(base, k, q)
        total = total + num / den
    return total


def limit_u(n: int, x: int, q, A, B, N: int):
    return _phi32(
        [q ** (-n), q ** (n - N) * B, q ** (-x)],
        [q ** (-N), q ** (-x) * A],
        A / B, q, n + 1,
    )


def limit_v(n: int, x: int, q, A, B, N: int):
    return _phi32(
        [q ** (-n), q ** (n - N) * B, q ** (x - N)],
        [q ** (-N), q ** (x - N + 2) * B / A],
        q, q, n + 1,
    )


def limit_h(n: int, q, A, B, N: int):
    den = _poch(A / (q * B), N, q) * _poch(q ** (-N), n, q) * _poch(q ** (1 - N) * B, 2 * n, q)
    if den == 0:
        raise ZeroDenominator("limit norm denominator vanishes")
    return (
        A**N * q ** (-N * (1 + n)) * _poch(q, n, q) * _poch(1 / B, N, q)
        * _poch(q * B, n, q) * _poch(q ** (n - N) * B, n, q) / den
    )


def induced_wilson_params(p: QParams, m: int, qc: Fraction) -> WilsonParams:
    """Wilson parameters whose qa -> infinity limit lands on the instance p,
    taken along qa = q^{-m}:  qe = q/(A*qa), qd = q*B/qc, with qb and qf
    fixed by the constraints."""
    qa = p.q ** (-m)
    qe = p.q / (p.A * qa)
    qd = p.q * p.B / scalar(qc)
    return WilsonParams(p.q, qa, scalar(qc), qd, qe, p.N)


def wilson_limit_check(
    p: QParams, m_list: list[int], qc: Fraction = Fraction(3)
) -> CheckReport:
    """Exact deviations of (w, u, v, h) from their limit targets shrink
    geometrically along qa = q^{-m}: strictly decreasing, with the largest
    successive ratio recorded and required below 1."""
    report = CheckReport(check="wilson_limit", params=p.as_dict())
    if not -1 < p.q < 1:
        raise InvalidParams("the limit path needs |q| < 1")
    q, A, B, N = p.q, p.A, p.B, p.N
    targets_w = [limit_weight(x, q, A, B, N) for x in range(N + 1)]
    targets_u = [[limit_u(n, x, q, A, B, N) for x in range(N + 1)] for n in range(N + 1)]
    targets_v = [[limit_v(n, x, q, A, B, N) for x in range(N + 1)] for n in range(N + 1)]
    targets_h = [limit_h(n, q, A, B, N) for n in range(N + 1)]
    deltas: list[tuple[int, Fraction]] = []
    skipped_ms = []
    for m in m_list:
        try:
            wp = induced_wilson_params(p, m, qc)
        except InvalidParams as exc:
            skipped_ms.append({"m": m, "reason": str(exc)})
            continue
        dev = Fraction(0)
        for x in range(N + 1):
            dev = max(dev, abs(wilson_weight(x, wp) - targets_w[x]))
        for n in range(N + 1):
            dev = max(dev, abs(wilson_h(n, wp) - targets_h[n]))
            for x in range(N + 1):
                dev = max(dev, abs(wilson_u(n, x, wp) - targets_u[n][x]))
                dev = max(dev, abs(wilson_v(n, x, wp) - targets_v[n][x]))
        deltas.append((m, dev))
    report.details["deviations"] = {str(m): frac_str(d) for m, d in deltas}
    if skipped_ms:
        report.details["skipped_m"] = skipped_ms
    if len(deltas) < 2:
        report.skipped = "fewer than two valid points on the limit path"
        return report
    ratios = []
    for (m0, d0), (m1, d1) in zip(deltas, deltas[1:]):
        if d0 == 0 or d1 >= d0:
            report.add_violation(m=m1, residual="deviation failed to decrease")
            continue
        ratios.append(d1 / d0)
    if ratios:
        bound = max(ratios)
        report.details["ratio_bound"] = frac_str(bound)
        report.details["ratio_bound_float"] = float(bound)
        if bound >= 1:
            report.add_violation(residual="no geometric decay: ratio bound >= 1")
    return report


def _rising(a, k: int):
    out = 1
    for j in range(k):
        out = out * (a + j)
    return out


@dataclass(frozen=True)
class HahnParams:
    """Rational exponents (alpha, beta) and grid size N for the q = 1 family."""

    alpha: Fraction
    beta: Fraction
    N: int

    def __post_init__(self):
        object.__setattr__(self, "alpha", scalar(self.alpha))
        object.__setattr__(self, "beta", scalar(self.beta))
        if not (isinstance(self.N, int) and self.N >= 0):
            raise InvalidParams("N must be a nonnegative integer")
        a, b, N = self.alpha, self.beta, self.N
        for x in range(N + 1):
            if x > 0 and (b - a - N + 2) + (x - 1) == 0:
                raise InvalidParams("weight denominator vanishes")
        for n in range(N + 1):
            for x in range(N + 1):
                for j in range(n):
                    if (a - x) + j == 0 or (x - N + b - a + 2) + j == 0:
                        raise InvalidParams("series denominator vanishes")
        if _rising(a - b - 1, N) == 0 or _rising(1 + b - N, 2 * N) == 0:
            raise InvalidParams("norm denominator vanishes")

    def as_dict(self) -> dict:
        return {"alpha": frac_str(self.alpha), "beta": frac_str(self.beta), "N": self.N}


def hahn_weight(x: int, hp: HahnParams) -> Fraction:
    den = _rising(1, x) * _rising(hp.beta - hp.alpha - hp.N + 2, x)
    if den == 0:
        raise ZeroDenominator("weight denominator vanishes")
    return Fraction(_rising(-hp.N, x)) * _rising(1 - hp.alpha, x) / den


def _f32(top, bottom, terms: int) -> Fraction:
    total = Fraction(0)
    for k in range(terms):
        den = _rising(1, k)
        for b in bottom:
            den = den * _rising(b, k)
        if den == 0:
            raise ZeroDenominator(f"series denominator vanishes at k={k}")
        num = Fraction(1)
        for t in top:
            num = num * _rising(t, k)
        total = total + num / den
    return total


def hahn_u(n: int, x: int, hp: HahnParams) -> Fraction:
    return _f32([-n, n + hp.beta - hp.N, -x], [-hp.N, hp.alpha - x], n + 1)


def hahn_U(n: int, hp: HahnParams) -> tuple[Fraction, ...]:
    """Grid values (u_n(0), ..., u_n(N)) of the first q = 1 family."""
    return tuple(hahn_u(n, x, hp) for x in range(hp.N + 1))


def hahn_v(n: int, x: int, hp: HahnParams) -> Fraction:
    return _f32([-n, n + hp.beta - hp.N, x - hp.N],
                [-hp.N, x - hp.N + hp.beta - hp.alpha + 2], n + 1)


def hahn_h(n: int, hp: HahnParams) -> Fraction:
    a, b, N = hp.alpha, hp.beta, hp.N
    den = _rising(a - b - 1, N) * _rising(-N, n) * _rising(1 + b - N, 2 * n)
    if den == 0:
        raise ZeroDenominator("norm denominator vanishes")
    return (
        Fraction(_rising(1, n)) * _rising(-b, N) * _rising(b + 1, n)
        * _rising(n + b - N, n) / den
    )


def check_hahn_biorthogonality(hp: HahnParams) -> CheckReport:
    """Sum_x w_x u_n v_m = delta_{nm} h_n at q = 1, exact; the weight is
    not normalized, so the n = m = 0 case doubles as its total mass."""
    report = CheckReport(check="hahn_biorthogonality", params=hp.as_dict())
    weights = [hahn_weight(x, hp) for x in range(hp.N + 1)]
    us = [[hahn_u(n, x, hp) for x in range(hp.N + 1)] for n in range(hp.N + 1)]
    vs = [[hahn_v(m, x, hp) for x in range(hp.N + 1)] for m in range(hp.N + 1)]
    norms = []
    for n in range(hp.N + 1):
        hn = hahn_h(n, hp)
        norms.append(frac_str(hn))
        if hn == 0:
            report.add_violation(n=n, residual="diagonal norm vanishes")
        for m in range(hp.N + 1):
            total = sum((weights[x] * us[n][x] * vs[m][x] for x in range(hp.N + 1)),
                        Fraction(0))
            expected = hn if n == m else Fraction(0)
            if total != expected:
                report.add_violation(n=n, m=m, residual=frac_str(total - expected))
    report.details["norms"] = norms
    return report


def _qto1_table(hp: HahnParams, h: Fraction, prec: int):
    """All (w, u, v, h) q-side values at q = e^h with the given precision."""
    with mpmath.workprec(prec):
        q = mpmath.exp(mpmath.mpf(h.numerator) / mpmath.mpf(h.denominator))
        A = q ** int(hp.alpha)
        B = q ** int(hp.beta)
        N = hp.N
        vals = []
        for x in range(N + 1):
            vals.append(limit_weight(x, q, A, B, N))
        for n in range(N + 1):
            vals.append(limit_h(n, q, A, B, N))
            for x in range(N + 1):
                vals.append(limit_u(n, x, q, A, B, N))
                vals.append(limit_v(n, x, q, A, B, N))
        return [mpmath.mpf(v) for v in vals]


def qto1_convergence_check(hp: HahnParams, h_list: list[Fraction]) -> CheckReport:
    """Deviation of the q-side quantities at q = e^h from their q = 1 values
    decreases along h_list with measured order about 1 (window [1/2, 2]).

    Each evaluation runs at 200-bit and 53-bit precision; the spread between
    the two estimates roundoff, and PrecisionLoss is raised when it is not
    safely below the deviation being measured.
    """
    report = CheckReport(check="qto1_convergence", params=hp.as_dict())
    if hp.alpha.denominator != 1 or hp.beta.denominator != 1:
        raise InvalidParams("the q -> 1 sweep needs integer exponents")
    h_list = [scalar(h) for h in h_list]
    if any(h <= 0 for h in h_list):
        raise InvalidParams("h values must be positive")
    exact = []
    for x in range(hp.N + 1):
        exact.append(hahn_weight(x, hp))
    for n in range(hp.N + 1):
        exact.append(hahn_h(n, hp))
        for x in range(hp.N + 1):
            exact.append(hahn_u(n, x, hp))
            exact.append(hahn_v(n, x, hp))
    with mpmath.workprec(220):
        exact_f = [mpmath.mpf(v.numerator) / mpmath.mpf(v.denominator) for v in exact]
    devs = []
    for h in h_list:
        hi = _qto1_table(hp, h, 200)
        lo = _qto1_table(hp, h, 53)
        with mpmath.workprec(220):
            dev = max(abs(a - b) for a, b in zip(hi, exact_f))
            err = max(abs(a - b) for a, b in zip(hi, lo))
            if err * 16 > dev:
                raise PrecisionLoss(
                    f"roundoff {mpmath.nstr(err)} not below deviation {mpmath.nstr(dev)} at h={h}")
        devs.append((h, dev))
    report.details["deviations"] = {frac_str(h): mpmath.nstr(d, 8) for h, d in devs}
    orders = []
    for (h0, d0), (h1, d1) in zip(devs, devs[1:]):
        if d1 >= d0:
            report.add_violation(h=frac_str(h1), residual="deviation failed to decrease")
            continue
        order = mpmath.log(d0 / d1) / mpmath.log(
            mpmath.mpf(h0.numerator) * h1.denominator
            / (mpmath.mpf(h0.denominator) * h1.numerator))
        orders.append(float(order))
        if not 0.5 <= order <= 2:
            report.add_violation(
                h=frac_str(h1), residual=f"measured order {float(order):.3f} outside [0.5, 2]")
    report.details["orders"] = orders
    return report
