import random

import pytest

from logvvmf.errors import (InconsistentInput, InexactInput,
                            NonPolynomialResult, TruncationUnreliable)
from logvvmf.fixtures import fixture_form, gen_eisenstein
from logvvmf.linalg import Matrix, QI
from logvvmf.modgroup import I, S, T, compose, random_unimodular
from logvvmf.polyring import poly_eval
from logvvmf.qexp import LogBlock, PureQSeries
from logvvmf.repspace import rep_evaluate, sigma_image, trivial_rep
from logvvmf.vvmf import (BODY_LOGBLOCKS, BODY_POLY, BODY_SCALARS, PolyVector,
                          VvmfForm, classify_boundary, component_basis,
                          equivalence_transform, functional_equation_residual,
                          make_C, make_binomial_C, slash_poly)


def rand_invertible(rng, n, bound=3):
    while True:
        M = Matrix.exact([[rng.randint(-bound, bound) for _ in range(n)]
                          for _ in range(n)])
        if M.det():
            return M


def test_make_C_examples():
    f1 = make_C(1)
    assert f1.k == 0 and f1.body.components == ((QI(1),),)
    f3 = make_C(3)
    assert f3.k == -2
    assert f3.body.components == (
        (QI(0), QI(0), QI(1)), (QI(0), QI(1)), (QI(1),))


def test_slash_examples():
    assert slash_poly(0, S, PolyVector.make([[1]])).components == ((QI(1),),)
    out = slash_poly(-1, S, PolyVector.make([[0, 1], [1]]))
    assert out.components == ((QI(-1),), (QI(0), QI(1)))
    # monomial tau^j under general g at weight 1-p: (a tau+b)^j (c tau+d)^{p-1-j}
    g = compose(T, S)   # (1,-1;1,0)
    p, j = 4, 2
    comps = [[0] * p for _ in range(p)]
    comps[0][j] = 1
    out = slash_poly(1 - p, g, PolyVector.make(comps))
    got = out.components[0]
    tau = 0.37 + 0.9j
    expect = (g.a * tau + g.b) ** j * (g.c * tau + g.d) ** (p - 1 - j)
    assert abs(poly_eval(got, tau) - expect) < 1e-12


def test_slash_nonpolynomial_rejected():
    with pytest.raises(NonPolynomialResult):
        slash_poly(2, S, PolyVector.make([[1]]))


def test_slash_cocycle():
    rng = random.Random(12)
    p = 3
    v = PolyVector.make([[rng.randint(-3, 3) for _ in range(p)] for _ in range(p)])
    for _ in range(50):
        g1 = random_unimodular(rng, 20)
        g2 = random_unimodular(rng, 20)
        lhs = slash_poly(1 - p, g2, slash_poly(1 - p, g1, v))
        rhs = slash_poly(1 - p, compose(g1, g2), v)
        assert lhs.components == rhs.components


def test_funceq_exact_zero_for_C():
    rng = random.Random(0)
    for p in range(1, 9):
        f = make_C(p)
        for _ in range(20):
            g = random_unimodular(rng, 50)
            assert functional_equation_residual(f, g, [0.3 + 1.5j]) == 0.0


def test_funceq_identity_gamma():
    f = fixture_form(gen_eisenstein(4, 60))
    assert functional_equation_residual(f, I, [1j, 0.2 + 1.4j]) < 1e-15


def test_funceq_numeric_eisenstein():
    f = fixture_form(gen_eisenstein(4, 60))
    assert functional_equation_residual(f, S, [1j]) < 1e-8
    assert functional_equation_residual(f, T, [1j, 0.31 + 1.7j]) < 1e-12


def test_funceq_truncation_guard():
    short = PureQSeries.make(0, 0, [1, 240, 2160], exact=False)
    f = VvmfForm(4, trivial_rep(), (short,), BODY_SCALARS)
    with pytest.raises(TruncationUnreliable):
        functional_equation_residual(f, S, [0.02 + 0.35j])


def test_funceq_detects_violation():
    # weight deliberately wrong: residual must be far from zero
    wrong = VvmfForm(6, trivial_rep(), (gen_eisenstein(4, 60).series,), BODY_SCALARS)
    assert functional_equation_residual(wrong, S, [0.4 + 1.2j]) > 1e-3


def test_equivalence_transform_roundtrip():
    rng = random.Random(5)
    f = make_C(3)
    A = rand_invertible(rng, 3)
    g = equivalence_transform(f, A)
    back = equivalence_transform(g, A.inv())
    assert back.body.components == f.body.components
    assert equivalence_transform(f, Matrix.identity(3)).body.components \
        == f.body.components
    # residual stays exactly zero
    gam = random_unimodular(rng, 30)
    assert functional_equation_residual(g, gam, []) == 0.0


def test_component_basis_examples():
    l, idx, red = component_basis(make_C(3))
    assert l == 3 and idx == (0, 1, 2)
    form = VvmfForm(-1, None, PolyVector.make([[0, 1], [0, 2]]), BODY_POLY,
                    check=False)
    l, idx, red = component_basis(form)
    assert l == 1 and idx == (0,)
    assert red[1][0] == QI(2)   # second component = 2 * first


def test_component_basis_logblock():
    fb2 = make_binomial_C(2)
    h1 = PureQSeries.make(0, 0, [1])
    blk = LogBlock.make(0, [h1, h1])
    form = VvmfForm(-1, fb2.rep, (blk,), BODY_LOGBLOCKS)
    l, idx, red = component_basis(form)
    assert l == 2


def test_classify_C_entire_with_identity_witness():
    for p in range(1, 7):
        c = classify_boundary(make_C(p))
        assert c.verdict == "Entire" and c.span == p
        assert c.witness == Matrix.identity(p)
        # witness validity: A rho A^-1 = sigma on generators
        A = c.witness
        for gen in (S, T):
            assert A @ rep_evaluate(make_C(p).rep, gen) @ A.inv() \
                == sigma_image(gen, p)


def test_classify_binomial_C_entire():
    for p in (2, 3, 4):
        f = make_binomial_C(p)
        c = classify_boundary(f)
        assert c.verdict == "Entire" and c.span == p
        # A maps the binomial components onto the monomials exactly
        A = c.witness
        for gen in (S, T):
            assert A @ rep_evaluate(f.rep, gen) @ A.inv() == sigma_image(gen, p)


def test_classify_eisenstein_boundary():
    f = fixture_form(gen_eisenstein(4, 60))
    c = classify_boundary(f)
    assert c.verdict == "NaturalBoundary"
    assert c.certificate == (0, 0, 1)    # a_1 = 240 != 0
    assert c.component_polynomial == (False,)


def test_classify_zero():
    z = VvmfForm(0, trivial_rep(), (PureQSeries.zero(),), BODY_SCALARS)
    assert classify_boundary(z).verdict == "Zero"


def test_classify_conjugation_invariance():
    rng = random.Random(17)
    f = make_C(3)
    for _ in range(20):
        A = rand_invertible(rng, 3)
        c = classify_boundary(equivalence_transform(f, A))
        assert c.verdict == "Entire" and c.span == 3


def test_classify_requires_exact_flags_for_entire():
    h = PureQSeries.make(0, 0, [1], exact=False)
    f = VvmfForm(0, trivial_rep(), (h,), BODY_SCALARS)
    with pytest.raises(InexactInput):
        classify_boundary(f)


def test_classify_weight_mismatch():
    # constant vector at the k = -l reading gets the pointed message
    h = PureQSeries.make(0, 0, [1])
    f = VvmfForm(-1, trivial_rep(), (h,), BODY_SCALARS)
    with pytest.raises(InconsistentInput, match="k = -l"):
        classify_boundary(f)


def test_classify_non_genuine_flagged():
    fb2 = make_binomial_C(2)
    h1 = PureQSeries.make(0, 0, [1])
    blk = LogBlock.make(0, [h1, h1])
    form = VvmfForm(-1, fb2.rep, (blk,), BODY_LOGBLOCKS)
    with pytest.raises(InconsistentInput):
        classify_boundary(form)


def test_classify_verify_funceq_flag():
    c = classify_boundary(make_C(3), verify_funceq=True)
    assert c.verdict == "Entire"
    assert any("verified" in n for n in c.notes)
    wrong = VvmfForm(6, trivial_rep(), (gen_eisenstein(4, 60).series,),
                     BODY_SCALARS)
    with pytest.raises(InconsistentInput):
        classify_boundary(wrong, verify_funceq=True)


def test_holomorphy_enforced_at_construction():
    bad = PureQSeries.make(0, -1, [1], exact=True)
    with pytest.raises(InconsistentInput):
        VvmfForm(0, trivial_rep(), (bad,), BODY_SCALARS)


def test_logblock_body_requires_matching_T():
    # sigma(T) for p=2 is upper triangular, not the modified Jordan block
    from logvvmf.repspace import sigma_rep
    h = PureQSeries.make(0, 0, [1])
    blk = LogBlock.make(0, [h, h])
    with pytest.raises(InconsistentInput):
        VvmfForm(-1, sigma_rep(2), (blk,), BODY_LOGBLOCKS)
