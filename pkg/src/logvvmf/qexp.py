"""Left-finite q-series with fractional exponent offset, binomial polynomials
in tau, and assembly of logarithmic q-expansions.

A PureQSeries models e^{2 pi i mu tau} * sum_{n >= nu} a_n q^n with rational
mu in [0,1) and integer leading index nu.  Truncation is explicit: the exact
flag asserts that every omitted coefficient is zero, and binary operations
propagate the reach (highest retained exponent) conservatively.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, OffsetMismatch, TruncationWarning
from .linalg import QI, Matrix, as_complex

MU_DENOMINATOR_CAP = 96

TWO_PI_I = 2j * math.pi


def _check_mu(mu) -> Fraction:
    mu = Fraction(mu)
    if not 0 <= mu < 1:
        raise ValueError(f"mu must lie in [0,1), got {mu}")
    if mu.denominator > MU_DENOMINATOR_CAP:
        raise ValueError(
            f"mu denominator exceeds the cap {MU_DENOMINATOR_CAP}: {mu}")
    return mu


@dataclass(frozen=True)
class PureQSeries:
    """Coefficients a_nu..a_{nu+L} of e^{2 pi i mu tau} sum a_n q^n."""

    mu: Fraction
    nu: int
    coeffs: tuple
    exact: bool

    @staticmethod
    def make(mu, nu, coeffs, exact=True) -> "PureQSeries":
        """Normalized constructor: strips leading zeros, canonicalizes zero."""
        mu = _check_mu(mu)
        coeffs = list(coeffs)
        while coeffs and not coeffs[0]:
            coeffs.pop(0)
            nu += 1
        if exact:
            while coeffs and not coeffs[-1]:
                coeffs.pop()
        if not any(coeffs):
            return PureQSeries(mu, 0, (), exact)
        return PureQSeries(mu, nu, tuple(coeffs), exact)

    @staticmethod
    def zero(mu=0, exact=True) -> "PureQSeries":
        return PureQSeries(_check_mu(mu), 0, (), exact)

    @property
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def reach(self):
        """Highest retained integer exponent, or None for the zero series."""
        if not self.coeffs:
            return None
        return self.nu + len(self.coeffs) - 1

    def coeff(self, n: int):
        if not self.coeffs or n < self.nu or n > self.reach:
            return 0
        return self.coeffs[n - self.nu]

    def terms(self):
        """Yield (n, a_n) over retained coefficients."""
        for i, c in enumerate(self.coeffs):
            yield self.nu + i, c


def q_add(h1: PureQSeries, h2: PureQSeries) -> PureQSeries:
    if h1.is_zero:
        return h2 if h1.exact else PureQSeries.make(h2.mu, h2.nu, h2.coeffs, False)
    if h2.is_zero:
        return h1 if h2.exact else PureQSeries.make(h1.mu, h1.nu, h1.coeffs, False)
    if h1.mu != h2.mu:
        raise OffsetMismatch(f"cannot add offsets mu={h1.mu} and mu={h2.mu}")
    exact = h1.exact and h2.exact
    reaches = [h.reach for h in (h1, h2) if not h.exact]
    nu = min(h1.nu, h2.nu)
    hi = max(h1.reach, h2.reach)
    if reaches:
        hi = min([hi] + reaches)
    coeffs = [h1.coeff(n) + h2.coeff(n) for n in range(nu, hi + 1)]
    return PureQSeries.make(h1.mu, nu, coeffs, exact)


def q_scale(h: PureQSeries, c) -> PureQSeries:
    if h.is_zero or not c:
        return PureQSeries.zero(exact=True)
    return PureQSeries.make(h.mu, h.nu, [c * a for a in h.coeffs], h.exact)


def q_mul(h1: PureQSeries, h2: PureQSeries) -> PureQSeries:
    if h1.is_zero or h2.is_zero:
        return PureQSeries.zero(exact=True)
    mu = h1.mu + h2.mu
    shift = 0
    if mu >= 1:
        mu -= 1
        shift = 1
    nu = h1.nu + h2.nu
    exact = h1.exact and h2.exact
    hi = h1.reach + h2.reach
    if not h1.exact:
        hi = min(hi, h1.reach + h2.nu)
    if not h2.exact:
        hi = min(hi, h2.reach + h1.nu)
    coeffs = [0] * (hi - nu + 1)
    for n1, a in h1.terms():
        if not a:
            continue
        for n2, b in h2.terms():
            n = n1 + n2
            if n <= hi:
                coeffs[n - nu] = coeffs[n - nu] + a * b
    return PureQSeries.make(mu, nu + shift, coeffs, exact)


def q_derivative(h: PureQSeries) -> PureQSeries:
    """Termwise d/dtau: a_n q^{n+mu} -> 2 pi i (n+mu) a_n q^{n+mu}."""
    mu_f = float(h.mu)
    coeffs = [TWO_PI_I * (n + mu_f) * as_complex(a) for n, a in h.terms()]
    return PureQSeries.make(h.mu, h.nu, coeffs, h.exact)


def q_tail_bound(h: PureQSeries, tau: complex) -> float:
    """Upper estimate of the omitted tail at tau; zero for exact series.

    Omitted coefficients are modeled as bounded by the largest retained one,
    giving a geometric bound with ratio e^{-2 pi Im tau}.
    """
    if h.exact or h.is_zero:
        return 0.0
    y = complex(tau).imag
    r = math.exp(-2 * math.pi * y)
    if r >= 1:
        return math.inf
    amax = max(abs(as_complex(a)) for a in h.coeffs)
    return amax * r ** (h.reach + 1 + float(h.mu)) / (1 - r)


def q_evaluate(h: PureQSeries, tau: complex) -> complex:
    """Sum the retained terms at tau; warns when the tail bound is significant."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"q_evaluate requires Im tau > 0, got {tau.imag}")
    total = 0j
    scale = 0.0
    mu_f = float(h.mu)
    for n, a in h.terms():
        term = as_complex(a) * cmath.exp(TWO_PI_I * (n + mu_f) * tau)
        total += term
        scale += abs(term)
    if not h.exact:
        tail = q_tail_bound(h, tau)
        if tail > 1e-14 * max(scale, 1e-300):
            warnings.warn(
                f"truncation tail {tail:.3g} is not negligible at Im tau = {tau.imag}",
                TruncationWarning, stacklevel=2)
    return total


def binom_evaluate(s: int, tau):
    """binom(tau, s) by the product formula tau(tau-1)...(tau-s+1)/s!.

    Exact for int/Fraction/QI arguments, complex otherwise.
    """
    if s < 0:
        raise ValueError("binomial degree must be nonnegative")
    acc = 1
    for j in range(s):
        acc = acc * (tau - j)
    fact = math.factorial(s)
    if isinstance(acc, (int, Fraction)):
        return acc / Fraction(fact)
    return acc / fact


@dataclass(frozen=True)
class LogBlock:
    """One Jordan block's data: series h_0..h_{m-1} sharing the offset mu."""

    mu: Fraction
    m: int
    h: tuple

    @staticmethod
    def make(mu, series) -> "LogBlock":
        mu = _check_mu(mu)
        series = tuple(series)
        if not series:
            raise ValueError("a block needs at least one series")
        for s in series:
            if not s.is_zero and s.mu != mu:
                raise OffsetMismatch(
                    f"series offset {s.mu} does not match block mu {mu}")
        fixed = tuple(s if s.mu == mu else PureQSeries(mu, s.nu, s.coeffs, s.exact)
                      for s in series)
        return LogBlock(mu, len(fixed), fixed)

    @property
    def exact(self) -> bool:
        return all(s.exact for s in self.h)


def holomorphy_check(block: LogBlock):
    """True iff no retained coefficient sits at exponent n + mu < 0.

    Returns (ok, first_violation) with the violation as (s, n).
    """
    for s, series in enumerate(block.h):
        for n, a in series.terms():
            if a and n + block.mu < 0:
                return False, (s, n)
    return True, None


def assemble_component(block: LogBlock, l: int, tau: complex) -> complex:
    """Component phi_l = sum_{s=0}^{l-1} binom(tau, s) h_{l-1-s}(tau)."""
    if not 1 <= l <= block.m:
        raise IndexError(f"component index {l} outside 1..{block.m}")
    total = 0j
    for s in range(l):
        total += binom_evaluate(s, tau) * q_evaluate(block.h[l - 1 - s], tau)
    return total


def root_of_unity(mu: Fraction) -> complex:
    return cmath.exp(TWO_PI_I * float(mu))


def exact_root_of_unity(mu: Fraction) -> QI:
    """e^{2 pi i mu} as a Gaussian rational; only mu with denominator | 4 qualify."""
    table = {Fraction(0): QI(1), Fraction(1, 2): QI(-1),
             Fraction(1, 4): QI(0, 1), Fraction(3, 4): QI(0, -1)}
    if mu not in table:
        raise ValueError(f"e^(2 pi i {mu}) is not a Gaussian rational")
    return table[mu]


def block_translation_matrix(blocks, as_exact=False):
    """The block-diagonal lambda(I+N) matrix acting in F(tau+1) = rho(T) F(tau)."""
    p = sum(b.m for b in blocks)
    if as_exact:
        rows = [[QI(0)] * p for _ in range(p)]
    else:
        rows = [[0j] * p for _ in range(p)]
    off = 0
    for b in blocks:
        lam = exact_root_of_unity(b.mu) if as_exact else root_of_unity(b.mu)
        for l in range(b.m):
            rows[off + l][off + l] = lam
            if l + 1 < b.m:
                rows[off + l + 1][off + l] = lam
        off += b.m
    return Matrix.exact(rows) if as_exact else Matrix.from_float(rows)


def translation_residual(blocks, tau_samples) -> float:
    """Max deviation of F(tau+1) = lambda(I+N) F(tau) over the samples.

    This is the direct numerical consequence of the logarithmic expansion
    shape together with the modified-Jordan block convention.
    """
    T_mat = block_translation_matrix(blocks)
    worst = 0.0
    for tau in tau_samples:
        values = []
        shifted = []
        for b in blocks:
            for l in range(1, b.m + 1):
                values.append(assemble_component(b, l, tau))
                shifted.append(assemble_component(b, l, tau + 1))
        predicted = T_mat.apply(values)
        worst = max(worst, max(abs(s - p) for s, p in zip(shifted, predicted)))
    return float(worst)
