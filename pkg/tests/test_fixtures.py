import pytest

from logvvmf.errors import UnsupportedWeight
from logvvmf.fixtures import (divisor_power_sum, fixture_form, gen_cusp_delta,
                              gen_eisenstein)
from logvvmf.modgroup import S, T
from logvvmf.vvmf import functional_equation_residual


def naive_sigma(n, k):
    # independent oracle: plain full scan
    return sum(d ** k for d in range(1, n + 1) if n % d == 0)


def test_divisor_sum_against_naive():
    for n in range(1, 200):
        for k in (3, 5):
            assert divisor_power_sum(n, k) == naive_sigma(n, k)


def test_eisenstein4_coefficients():
    e4 = gen_eisenstein(4, 10).series
    assert e4.coeff(0) == 1
    assert e4.coeff(1) == 240          # 240 * sigma_3(1)
    assert e4.coeff(2) == 2160         # 240 * 9
    assert e4.coeff(3) == 240 * naive_sigma(3, 3)
    assert not e4.exact


def test_eisenstein6_coefficients():
    e6 = gen_eisenstein(6, 10).series
    assert e6.coeff(0) == 1
    assert e6.coeff(1) == -504
    assert e6.coeff(2) == -504 * naive_sigma(2, 5)


def test_unsupported_weight():
    with pytest.raises(UnsupportedWeight):
        gen_eisenstein(8, 10)


def test_delta_tau_values():
    d = gen_cusp_delta(30).series
    known = {1: 1, 2: -24, 3: 252, 4: -1472, 5: 4830, 6: -6048,
             7: -16744, 8: 84480}
    for n, t in known.items():
        assert d.coeff(n) == t
    assert d.coeff(0) == 0


def test_fixture_functional_equation_invariant():
    for fx in (gen_eisenstein(4, 60), gen_eisenstein(6, 60), gen_cusp_delta(60)):
        form = fixture_form(fx)
        for g in (S, T):
            assert functional_equation_residual(form, g, [1j]) < 1e-8
