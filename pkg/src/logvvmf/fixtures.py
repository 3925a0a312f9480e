"""Scalar modular-form coefficient prefixes used as one-dimensional test
fixtures: the weight 4 and 6 Eisenstein series and the weight 12 cusp form.

Coefficients are exact integers; the series are truncations, so their exact
flag is False.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedWeight
from .qexp import PureQSeries
from .repspace import trivial_rep
from .vvmf import BODY_SCALARS, VvmfForm


def divisor_power_sum(n: int, k: int) -> int:
    """sigma_k(n) by trial division; the brute-force oracle."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d ** k
            if d != n // d:
                total += (n // d) ** k
        d += 1
    return total


@dataclass(frozen=True)
class FixtureSeries:
    name: str
    weight: int
    series: PureQSeries


def gen_eisenstein(weight: int, terms: int = 60) -> FixtureSeries:
    """Normalized Eisenstein series prefix: constant term 1, then divisor sums."""
    if terms < 1:
        raise ValueError("need at least one term")
    if weight == 4:
        factor, k = 240, 3
    elif weight == 6:
        factor, k = -504, 5
    else:
        raise UnsupportedWeight(f"no Eisenstein fixture of weight {weight}")
    coeffs = [1] + [factor * divisor_power_sum(n, k) for n in range(1, terms)]
    return FixtureSeries(f"eisenstein{weight}", weight,
                         PureQSeries.make(0, 0, coeffs, exact=False))


def _eta_product_coefficients(terms: int):
    """Coefficients of q * prod (1 - q^n)^24 up to q^terms."""
    # prod over n of (1 - q^n), truncated at degree terms
    base = [0] * (terms + 1)
    base[0] = 1
    for n in range(1, terms + 1):
        for i in range(terms, n - 1, -1):
            base[i] -= base[i - n]
    # raise to the 24th power: 24 = 16 + 8
    def mul(p, q):
        out = [0] * (terms + 1)
        for i, ci in enumerate(p):
            if ci:
                for j in range(min(len(q), terms + 1 - i)):
                    if q[j]:
                        out[i + j] += ci * q[j]
        return out
    p2 = mul(base, base)
    p4 = mul(p2, p2)
    p8 = mul(p4, p4)
    p16 = mul(p8, p8)
    p24 = mul(p16, p8)
    return p24


def gen_cusp_delta(terms: int = 60) -> FixtureSeries:
    """The weight-12 cusp form prefix q prod(1-q^n)^24 = q - 24q^2 + ..."""
    if terms < 1:
        raise ValueError("need at least one term")
    p24 = _eta_product_coefficients(terms)
    coeffs = p24[:terms]   # shifted by one power of q via nu = 1
    return FixtureSeries("cusp12", 12, PureQSeries.make(0, 1, coeffs, exact=False))


def fixture_form(fix: FixtureSeries) -> VvmfForm:
    """Wrap a fixture as a one-dimensional form over the trivial representation."""
    return VvmfForm(fix.weight, trivial_rep(), (fix.series,), BODY_SCALARS)
