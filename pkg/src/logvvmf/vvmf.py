"""The pair (rho, F): polynomial vectors, the stroke operator, functional-
equation checking, the canonical example (sigma, C), and the natural-boundary
classifier.

The classifier implements the dichotomy: a nonzero holomorphic form whose
q-data is concentrated at exponent n + mu = 0 has polynomial components and is
analytic on all of C exactly when the components span a full polynomial space
and the weight matches; any other nonzero holomorphic form has the real line
as a natural boundary, witnessed by a nonzero coefficient at n + mu > 0.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

from .errors import (DimensionMismatch, InconsistentInput, InexactInput,
                     NonPolynomialResult, SingularMatrix, TruncationUnreliable,
                     TruncationWarning)
from .linalg import EXACT, Matrix, QI, as_complex, is_exact_scalar, to_qi
from .modgroup import S as GEN_S
from .modgroup import T as GEN_T
from .modgroup import UnimodularMatrix, compose, moebius
from .polyring import (binom_poly, poly, poly_add, poly_deg, poly_eval,
                       poly_mul, poly_pow, poly_scale)
from .qexp import LogBlock, PureQSeries, assemble_component, holomorphy_check, \
    q_add, q_evaluate, q_scale, q_tail_bound
from .repspace import Representation, rep_evaluate, sigma_image, sigma_rep

BODY_POLY = "poly"
BODY_LOGBLOCKS = "logblocks"
BODY_SCALARS = "scalars"


@dataclass(frozen=True)
class PolyVector:
    """p polynomials in tau with exact coefficients, degrees <= p-1."""

    components: tuple

    @staticmethod
    def make(components) -> "PolyVector":
        comps = tuple(poly(c) for c in components)
        p = len(comps)
        for c in comps:
            if poly_deg(c) > p - 1:
                raise ValueError(
                    f"component degree {poly_deg(c)} exceeds p-1 = {p - 1}")
        return PolyVector(comps)

    @property
    def p(self) -> int:
        return len(self.components)

    @property
    def is_zero(self) -> bool:
        return all(not c for c in self.components)


class VvmfForm:
    """Weight, representation and component data of a vector-valued form."""

    def __init__(self, k: int, rep: Representation, body, body_kind: str,
                 check: bool = True):
        self.k = int(k)
        self.rep = rep
        self.body = body
        self.body_kind = body_kind
        if check:
            self._validate()

    # -- construction-time invariants -----------------------------------

    def _validate(self):
        p = self.rep.p
        if self.body_kind == BODY_POLY:
            if self.body.p != p:
                raise DimensionMismatch(
                    f"polynomial vector has {self.body.p} components, rep has p = {p}")
        elif self.body_kind == BODY_LOGBLOCKS:
            blocks = self.body
            if sum(b.m for b in blocks) != p:
                raise DimensionMismatch("block sizes do not sum to the dimension")
            self._check_T_structure([(b.mu, b.m) for b in blocks])
            for i, b in enumerate(blocks):
                ok, viol = holomorphy_check(b)
                if not ok:
                    raise InconsistentInput(
                        f"block {i} violates holomorphy at (s, n) = {viol}")
        elif self.body_kind == BODY_SCALARS:
            series = self.body
            if len(series) != p:
                raise DimensionMismatch("one scalar series per component required")
            self._check_T_structure([(h.mu, 1) for h in series])
            for i, h in enumerate(series):
                ok, viol = holomorphy_check(LogBlock.make(h.mu, [h]))
                if not ok:
                    raise InconsistentInput(
                        f"component {i} violates holomorphy at n = {viol[1]}")
        else:
            raise ValueError(f"unknown body kind {self.body_kind!r}")

    def _check_T_structure(self, blocks):
        """The T-image must be the block-diagonal lambda(I+N) for the body's blocks."""
        from .qexp import block_translation_matrix
        wrapped = [LogBlock(mu, m, tuple(PureQSeries.zero(mu) for _ in range(m)))
                   for mu, m in blocks]
        if self.rep.backend == EXACT:
            expected = block_translation_matrix(wrapped, as_exact=True)
            if self.rep.T_img != expected:
                raise InconsistentInput(
                    "rho(T) is not in the modified Jordan form matching the body")
        else:
            expected = block_translation_matrix(wrapped)
            if self.rep.T_img.frobenius_distance(expected) > 1e-9:
                raise InconsistentInput(
                    "rho(T) deviates from the modified Jordan form of the body")

    # -- basic queries ----------------------------------------------------

    @property
    def p(self) -> int:
        return self.rep.p

    @property
    def is_zero(self) -> bool:
        if self.body_kind == BODY_POLY:
            return self.body.is_zero
        if self.body_kind == BODY_LOGBLOCKS:
            return all(h.is_zero for b in self.body for h in b.h)
        return all(h.is_zero for h in self.body)

    def blocks(self):
        """The body as a list of LogBlocks (scalars become 1x1 blocks)."""
        if self.body_kind == BODY_LOGBLOCKS:
            return list(self.body)
        if self.body_kind == BODY_SCALARS:
            return [LogBlock.make(h.mu, [h]) for h in self.body]
        raise ValueError("polynomial bodies carry no q-expansion blocks")

    def evaluate_components(self, tau: complex):
        """All component functions at tau, in the component order of rho."""
        if self.body_kind == BODY_POLY:
            return [poly_eval(c, complex(tau)) for c in self.body.components]
        if self.body_kind == BODY_LOGBLOCKS:
            out = []
            for b in self.body:
                out.extend(assemble_component(b, l, tau) for l in range(1, b.m + 1))
            return out
        return [q_evaluate(h, tau) for h in self.body]

    def tail_bound(self, tau: complex) -> float:
        if self.body_kind == BODY_POLY:
            return 0.0
        total = 0.0
        for b in self.blocks():
            for h in b.h:
                total += q_tail_bound(h, tau)
        return total

    def __repr__(self):
        return f"VvmfForm(k={self.k}, p={self.p}, body={self.body_kind})"


# ---------------------------------------------------------------------------
# canonical example and the stroke operator
# ---------------------------------------------------------------------------

def make_C(p: int) -> VvmfForm:
    """(sigma, C) with C = (tau^{p-1}, ..., 1)^t, a weight 1-p form."""
    if p < 1:
        raise ValueError("dimension must be >= 1")
    comps = []
    for i in range(p):
        coeffs = [QI(0)] * p
        coeffs[p - 1 - i] = QI(1)
        comps.append(coeffs)
    return VvmfForm(1 - p, sigma_rep(p), PolyVector.make(comps), BODY_POLY)


def make_binomial_C(p: int) -> VvmfForm:
    """(sigma, C) rewritten on the binomial basis (binom(tau,0), ..., binom(tau,p-1)).

    The conjugated T-image is the single modified Jordan block I + N, so this
    is the canonical genuine form with a log-block body: h_0 = 1 and all
    higher h_s = 0 in each component.
    """
    from .repspace import conjugate
    if p < 1:
        raise ValueError("dimension must be >= 1")
    rows = []
    for i in range(p):
        bp = binom_poly(i)
        rows.append([bp[p - 1 - m] if p - 1 - m < len(bp) else QI(0)
                     for m in range(p)])
    A0 = Matrix.exact(rows)
    rep = conjugate(sigma_rep(p), A0)
    h = [PureQSeries.make(0, 0, [1])] + [PureQSeries.zero() for _ in range(p - 1)]
    block = LogBlock.make(0, h)
    return VvmfForm(1 - p, rep, (block,), BODY_LOGBLOCKS)


def slash_poly(k: int, g: UnimodularMatrix, v: PolyVector) -> PolyVector:
    """The weight-k stroke action on a polynomial vector, kept exact.

    Each component f of degree D becomes N(tau) (c tau + d)^{-k-D} with N the
    cleared numerator; a negative exponent must divide exactly, otherwise the
    result is not polynomial.
    """
    a, b, c, d = g.entries()
    num_lin = poly([b, a])     # a tau + b
    den_lin = poly([d, c])     # c tau + d
    out = []
    for f in v.components:
        if not f:
            out.append(())
            continue
        D = poly_deg(f)
        N = ()
        for j, coeff in enumerate(f):
            if not coeff:
                continue
            term = poly_mul(poly_pow(num_lin, j), poly_pow(den_lin, D - j))
            N = poly_add(N, poly_scale(term, coeff))
        e = -k - D
        if e >= 0:
            out.append(poly_mul(N, poly_pow(den_lin, e)))
        else:
            from .polyring import poly_divmod
            quot, rem = poly_divmod(N, poly_pow(den_lin, -e))
            if rem:
                raise NonPolynomialResult(
                    f"(c tau + d)^{-e} does not divide the slashed numerator")
            out.append(quot)
    return PolyVector(tuple(out))


def functional_equation_residual(form: VvmfForm, g: UnimodularMatrix,
                                 tau_samples) -> float:
    """Max over samples of the sup-norm of F|_k g - rho(g) F.

    Polynomial bodies over an exact representation are compared symbolically
    and return exactly 0.0 on success; series bodies are evaluated numerically
    with truncation-tail guards.
    """
    rho_g = rep_evaluate(form.rep, g)
    if form.body_kind == BODY_POLY and form.rep.backend == EXACT:
        lhs = slash_poly(form.k, g, form.body)
        rhs = [(), ] * form.p
        for i in range(form.p):
            acc = ()
            for j in range(form.p):
                acc = poly_add(acc, poly_scale(form.body.components[j],
                                               rho_g.entry(i, j)))
            rhs[i] = acc
        diffs = [poly_add(l, poly_scale(r, QI(-1)))
                 for l, r in zip(lhs.components, rhs)]
        if all(not dd for dd in diffs):
            return 0.0
        worst = max(abs(complex(c)) for dd in diffs for c in dd)
        for tau in tau_samples:
            worst = max(worst, max(abs(poly_eval(dd, complex(tau))) for dd in diffs))
        return worst

    a, b, c, d = g.entries()
    worst = 0.0
    for tau in tau_samples:
        tau = complex(tau)
        gt = moebius(g, tau)
        # the per-series warnings are superseded by the hard guard below
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            at_tau = form.evaluate_components(tau)
            at_gt = form.evaluate_components(gt)
        scale = max(1.0, max(abs(x) for x in at_tau))
        tails = form.tail_bound(tau) + form.tail_bound(gt)
        if tails > 1e-10 * scale:
            raise TruncationUnreliable(
                f"tail bound {tails:.3g} exceeds 1e-10 of the working scale at tau={tau}")
        jac = (c * tau + d) ** (-form.k)
        lhs = [jac * x for x in at_gt]
        rhs = rho_g.apply(at_tau)
        worst = max(worst, max(abs(x - as_complex(y)) for x, y in zip(lhs, rhs)))
    return worst


def equivalence_transform(form: VvmfForm, A: Matrix) -> VvmfForm:
    """The equivalent pair (A rho A^{-1}, A F).

    Fully supported for polynomial bodies; series bodies are transformed when
    the result still fits the block structure (e.g. scalar forms, or blocks
    sharing one offset), and rejected otherwise.
    """
    from .repspace import conjugate
    if A.shape != (form.p, form.p):
        raise DimensionMismatch("transform matrix has wrong shape")
    new_rep = conjugate(form.rep, A)   # raises SingularMatrix if needed
    if form.body_kind == BODY_POLY:
        comps = []
        for i in range(form.p):
            acc = ()
            for j in range(form.p):
                acc = poly_add(acc, poly_scale(form.body.components[j],
                                               A.entry(i, j)))
            comps.append(acc)
        return VvmfForm(form.k, new_rep, PolyVector(tuple(comps)), BODY_POLY)
    if form.body_kind == BODY_SCALARS:
        series = list(form.body)
        new_series = []
        for i in range(form.p):
            acc = PureQSeries.zero(exact=True)
            for j in range(form.p):
                aij = A.entry(i, j)
                if aij:
                    acc = q_add(acc, q_scale(series[j], aij))
            new_series.append(acc)
        return VvmfForm(form.k, new_rep, tuple(new_series), BODY_SCALARS)
    raise InconsistentInput(
        "equivalence transforms of log-block bodies are only defined when the "
        "block structure is preserved; transform the polynomial reduction instead")


# ---------------------------------------------------------------------------
# component span and the boundary classifier
# ---------------------------------------------------------------------------

def _component_rows(form: VvmfForm):
    """Coefficient rows of all components in shared exact coordinates.

    Polynomial bodies use monomial coordinates; series bodies use
    (binomial degree s, offset mu, index n) coordinates.  Returns
    (rows, all_exact) where rows are lists over a common column ordering.
    """
    if form.body_kind == BODY_POLY:
        width = max((len(c) for c in form.body.components), default=0)
        rows = [[c[i] if i < len(c) else QI(0) for i in range(width)]
                for c in form.body.components]
        return rows, True
    keys = []
    seen = {}
    entries = []   # per component: dict key -> coeff
    for b in form.blocks():
        for l in range(1, b.m + 1):
            row = {}
            for s in range(l):
                h = b.h[l - 1 - s]
                for n, a in h.terms():
                    if not a:
                        continue
                    key = (s, b.mu, n)
                    if key not in seen:
                        seen[key] = len(keys)
                        keys.append(key)
                    row[key] = row.get(key, 0) + a
            entries.append(row)
    keys.sort()
    order = {k: i for i, k in enumerate(keys)}
    rows = []
    all_exact = True
    for row in entries:
        vec = [0] * len(keys)
        for key, a in row.items():
            vec[order[key]] = a
            if not is_exact_scalar(a):
                all_exact = False
        rows.append(vec)
    return rows, all_exact


def _greedy_basis(rows, exact: bool):
    """Indices of a maximal independent subfamily, scanning in order."""
    import numpy as np
    chosen = []
    if exact:
        current = []
        rank = 0
        for i, r in enumerate(rows):
            trial = current + [[QI(x) if not isinstance(x, QI) else x for x in r]]
            new_rank = Matrix.exact(trial).rank()
            if new_rank > rank:
                chosen.append(i)
                current = trial
                rank = new_rank
    else:
        current = []
        rank = 0
        for i, r in enumerate(rows):
            trial = current + [[as_complex(x) for x in r]]
            arr = np.array(trial, dtype=complex)
            new_rank = Matrix.from_float(arr).rank()
            if new_rank > rank:
                chosen.append(i)
                current = trial
                rank = new_rank
    return chosen


def _exact_solve(A_rows, b):
    """One solution x of A x = b over Q(i), or None when inconsistent."""
    n = len(A_rows)
    m = len(A_rows[0]) if A_rows else 0
    aug = Matrix.exact([list(r) + [bb] for r, bb in zip(A_rows, b)])
    rows, pivots = aug.rref()
    if m in pivots:
        return None
    x = [QI(0)] * m
    for r, pc in enumerate(pivots):
        x[pc] = rows[r][m]
    return x


def component_basis(form: VvmfForm):
    """Rank of the component family with a concrete independent selection.

    Returns (l, basis_indices, reduction) where reduction[i] expresses
    component i as a combination of the selected basis components.
    """
    rows, exact = _component_rows(form)
    if not rows or all(not any(r) for r in rows):
        return 0, (), ()
    chosen = _greedy_basis(rows, exact)
    l = len(chosen)
    reduction = []
    if exact:
        basis_rows = [[QI(x) for x in rows[i]] for i in chosen]
        Bt = [[basis_rows[r][ccol] for r in range(l)] for ccol in range(len(rows[0]))]
        for r in rows:
            sol = _exact_solve(Bt, [QI(x) for x in r])
            reduction.append(tuple(sol))
    else:
        import numpy as np
        B = np.array([[as_complex(x) for x in rows[i]] for i in chosen], dtype=complex)
        for r in rows:
            sol, *_ = np.linalg.lstsq(B.T, np.array([as_complex(x) for x in r]),
                                      rcond=None)
            reduction.append(tuple(sol))
    return l, tuple(chosen), tuple(reduction)


@dataclass(frozen=True)
class Classification:
    """Outcome of the boundary dichotomy for one form."""

    verdict: str                      # "Entire" | "NaturalBoundary" | "Zero"
    span: int = 0
    witness: Matrix | None = None
    basis_indices: tuple = ()
    certificate: tuple | None = None  # (block index, s, n) with n + mu > 0
    component_polynomial: tuple = ()
    notes: tuple = ()


def _polynomiality_flags(form: VvmfForm):
    """Per component: does all retained data sit at exponent n + mu = 0?"""
    if form.body_kind == BODY_POLY:
        return tuple(True for _ in range(form.p))
    flags = []
    for b in form.blocks():
        block_flags = []
        for l in range(1, b.m + 1):
            ok = True
            for s in range(l):
                for n, a in b.h[l - 1 - s].terms():
                    if a and n + b.mu != 0:
                        ok = False
            block_flags.append(ok)
        flags.extend(block_flags)
    return tuple(flags)


def _find_certificate(form: VvmfForm):
    if form.body_kind == BODY_POLY:
        return None
    for bi, b in enumerate(form.blocks()):
        for s, h in enumerate(b.h):
            for n, a in h.terms():
                if a and n + b.mu > 0:
                    return (bi, s, n)
    return None


def _as_polynomials(form: VvmfForm):
    """Exact polynomial components, valid only in the concentrated case."""
    if form.body_kind == BODY_POLY:
        return list(form.body.components)
    comps = []
    for b in form.blocks():
        consts = [h.coeff(0) for h in b.h]
        for l in range(1, b.m + 1):
            acc = ()
            for s in range(l):
                cval = consts[l - 1 - s]
                if cval:
                    acc = poly_add(acc, poly_scale(binom_poly(s), to_qi(cval)))
            comps.append(acc)
    return comps


def classify_boundary(form: VvmfForm, verify_funceq: bool = False,
                      funceq_samples=(0.3 + 1.5j, 0.1 + 2.0j)) -> Classification:
    """Decide Zero / NaturalBoundary / Entire for a holomorphic form.

    A nonzero retained coefficient at exponent n + mu > 0 certifies the
    natural boundary outright.  The entire verdict additionally demands exact
    (complete) series, a component span equal to a full polynomial space, and
    the matching weight; the witness then maps the independent components onto
    the canonical polynomial vector.
    """
    notes = []
    if verify_funceq:
        for g in (GEN_S, GEN_T, compose(GEN_S, GEN_T)):
            resid = functional_equation_residual(form, g, funceq_samples)
            if resid > 1e-8:
                raise InconsistentInput(
                    f"functional equation residual {resid:.3g} at {g} exceeds 1e-8")
        notes.append("functional equation verified numerically at S, T, ST")

    if form.is_zero:
        return Classification("Zero", notes=tuple(notes))

    flags = _polynomiality_flags(form)
    cert = _find_certificate(form)
    if cert is not None:
        return Classification("NaturalBoundary", certificate=cert,
                              component_polynomial=flags, notes=tuple(notes))

    # concentrated (polynomial) case: exactness is now mandatory
    if form.body_kind != BODY_POLY:
        if not all(h.exact for b in form.blocks() for h in b.h):
            raise InexactInput(
                "cannot certify polynomiality from truncated series; "
                "exact flags are required for an Entire verdict")
    comps = _as_polynomials(form)
    l, basis_idx, _ = component_basis(form if form.body_kind == BODY_POLY else
                                      _poly_form_view(form, comps))
    max_deg = max(poly_deg(c) for c in comps)
    if max_deg > l - 1:
        raise InconsistentInput(
            f"components span dimension {l} but reach degree {max_deg}; "
            "a genuine holomorphic form cannot do this")
    if form.k != 1 - l:
        msg = (f"weight {form.k} does not match 1 - span = {1 - l}")
        if form.k == -l:
            msg += " (input matches the k = -l reading; this library uses k = 1-l)"
        raise InconsistentInput(msg)

    basis_rows = []
    for i in basis_idx:
        cc = comps[i]
        row = [cc[l - 1 - m] if l - 1 - m < len(cc) else QI(0) for m in range(l)]
        basis_rows.append([QI(x) if not isinstance(x, QI) else x for x in row])
    M = Matrix.exact(basis_rows)
    try:
        A = M.inv()
    except SingularMatrix:
        raise InconsistentInput("independent components produced a singular matrix")

    if l == form.p:
        sig_S, sig_T = sigma_image(GEN_S, l), sigma_image(GEN_T, l)
        A_inv = A.inv()
        ok = (A @ rep_evaluate(form.rep, GEN_S) @ A_inv == sig_S and
              A @ rep_evaluate(form.rep, GEN_T) @ A_inv == sig_T)
        if not ok:
            raise InconsistentInput(
                "witness conjugation does not carry rho to sigma on the generators; "
                "the input cannot satisfy the functional equation")
    else:
        notes.append(f"span {l} < dimension {form.p}: witness applies to the "
                     "selected basis components")
    return Classification("Entire", span=l, witness=A, basis_indices=basis_idx,
                          component_polynomial=flags, notes=tuple(notes))


def _poly_form_view(form: VvmfForm, comps):
    """A lightweight polynomial-body stand-in for rank computations."""
    pv = PolyVector(tuple(poly(c) for c in comps))
    view = VvmfForm.__new__(VvmfForm)
    view.k = form.k
    view.rep = form.rep
    view.body = pv
    view.body_kind = BODY_POLY
    return view
