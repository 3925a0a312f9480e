"""Asymptotics near rational boundary points: regrouped exponential-polynomial
sums, dominant-term extraction, growth-exponent probes, the Bol identity, and
the flatness detector for repeatedly-differentiated exponential sums.

The growth probe exploits the transformation law to evaluate a component near
a rational point a/c through its values at tau0 + N, where the q-series still
converge; the log-log slope of the resulting magnitudes estimates k + M - 1
for forms whose top Jordan block has size M.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (DegenerateFit, DomainError, TruncationUnreliable,
                     TruncationWarning, ZeroSum)
from .linalg import QI, as_complex
from .modgroup import UnimodularMatrix, moebius
from .polyring import (poly, poly_add, poly_deg, poly_derivative, poly_eval,
                       poly_mul, poly_pow, poly_scale)
from .qexp import (TWO_PI_I, PureQSeries, binom_evaluate, q_add,
                   q_derivative, q_evaluate, q_scale, q_tail_bound)
from .vvmf import VvmfForm
from .repspace import rep_evaluate


# ---------------------------------------------------------------------------
# regrouped exponential-polynomial sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentialPolySum:
    """sum_{s=0}^{B} binom(tau,s) sum_j e^{2 pi i mu_j tau} g_s^{(j)}(tau).

    Each layer holds pairs (mu, g) with distinct mu and g a pure integral
    q-series (offset zero); the top layer s = B is nonzero.
    """

    B: int
    layers: tuple     # layers[s] = tuple of (Fraction mu, PureQSeries with mu=0)
    k: int = 0

    def evaluate(self, tau: complex) -> complex:
        tau = complex(tau)
        total = 0j
        for s, layer in enumerate(self.layers):
            if not layer:
                continue
            inner = 0j
            for mu, g in layer:
                inner += cmath.exp(TWO_PI_I * float(mu) * tau) * q_evaluate(g, tau)
            total += binom_evaluate(s, tau) * inner
        return total

    def tail_bound(self, tau: complex) -> float:
        total = 0.0
        for s, layer in enumerate(self.layers):
            w = abs(binom_evaluate(s, complex(tau)))
            for mu, g in layer:
                damp = math.exp(-2 * math.pi * float(mu) * complex(tau).imag)
                total += w * damp * q_tail_bound(g, tau)
        return total


def _strip_mu(h: PureQSeries) -> PureQSeries:
    return PureQSeries.make(0, h.nu, h.coeffs, h.exact)


def regroup(blocks, row, k: int = 0) -> ExponentialPolySum:
    """Regroup sum_l alpha_l phi_l over the blocks into layered exponential sums.

    `row` lists the coefficients alpha (one per component, in block order);
    layer s collects sum_j sum_{l >= s+1} alpha_l^{(j)} h_{l-1-s}^{(j)}, with
    equal offsets merged by coefficient addition.
    """
    p = sum(b.m for b in blocks)
    if len(row) != p:
        raise ValueError(f"row length {len(row)} does not match dimension {p}")
    M = max(b.m for b in blocks)
    layers = []
    for s in range(M):
        acc = {}
        off = 0
        for b in blocks:
            for l in range(s + 1, b.m + 1):
                alpha = row[off + l - 1]
                if not alpha:
                    continue
                term = q_scale(b.h[l - 1 - s], alpha)
                if term.is_zero:
                    continue
                prev = acc.get(b.mu)
                acc[b.mu] = q_add(prev, term) if prev is not None else term
            off += b.m
        layer = tuple((mu, _strip_mu(g)) for mu, g in sorted(acc.items())
                      if not g.is_zero)
        layers.append(layer)
    B = max((s for s, layer in enumerate(layers) if layer), default=None)
    if B is None:
        raise ZeroSum("every layer of the regrouped sum vanishes")
    return ExponentialPolySum(B, tuple(layers[:B + 1]), k)


def dominant_term(sum_: ExponentialPolySum):
    """The unique B-layer term minimizing nu + mu; returns (index, exponent)."""
    top = sum_.layers[sum_.B]
    if not top:
        raise ZeroSum("the top layer is empty")
    best = None
    for j, (mu, g) in enumerate(top):
        expo = Fraction(g.nu) + mu
        if best is None or expo < best[1]:
            best = (j, expo)
    return best


def _term_bound_profile(mu, g):
    """(leading exponent, |leading coeff|, [(exponent, |coeff|) others], tail info)."""
    entries = [(Fraction(n) + mu, abs(as_complex(a))) for n, a in g.terms() if a]
    entries.sort()
    lead = entries[0]
    rest = entries[1:]
    tail = None
    if not g.exact:
        amax = max(abs(as_complex(a)) for a in g.coeffs)
        tail = (Fraction(g.reach + 1) + mu, amax)
    return lead, rest, tail


def min_imag_threshold(sum_: ExponentialPolySum, grid_real=(0.0, 0.3, 0.7)) -> float:
    """A height y0 past which the dominant B-layer term exceeds twice the rest.

    Uses retained coefficients plus a geometric tail bound; fails loudly when
    no finite height can be certified at the available truncation.  The
    returned value is verified on a grid at Im tau = y0 * {1, 1.5, 2}.
    """
    top = sum_.layers[sum_.B]
    j0, _ = dominant_term(sum_)
    if len(top) == 1 and top[0][1].exact:
        return 1.0

    profiles = [_term_bound_profile(mu, g) for mu, g in top]

    def margin(y: float) -> float:
        # lower bound of the dominant term minus twice the rest's upper bound
        damp = lambda e: math.exp(-2 * math.pi * float(e) * y)
        r = math.exp(-2 * math.pi * y)
        if r >= 1:
            return -math.inf

        def tail_of(t):
            return 0.0 if t is None else t[1] * damp(t[0]) / (1 - r)

        lead, rest, tail = profiles[j0]
        low = lead[1] * damp(lead[0]) - sum(cc * damp(e) for e, cc in rest) \
            - tail_of(tail)
        high = 0.0
        for j, (lead_j, rest_j, tail_j) in enumerate(profiles):
            if j == j0:
                continue
            high += lead_j[1] * damp(lead_j[0]) + \
                sum(cc * damp(e) for e, cc in rest_j) + tail_of(tail_j)
        return low - 2 * high

    hi = 0.25
    while margin(hi) <= 0:
        hi *= 2
        if hi > 64:
            raise TruncationUnreliable(
                "no finite height certifies domination at this truncation")
    lo = 0.0
    for _ in range(60):
        mid = (lo + hi) / 2
        if mid > 0 and margin(mid) > 0:
            hi = mid
        else:
            lo = mid
    y0 = hi * 1.000001

    # verification grid per the contract
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", TruncationWarning)
        for mult in (1.0, 1.5, 2.0):
            for x in grid_real:
                tau = complex(x, y0 * mult)
                dom = abs(cmath.exp(TWO_PI_I * float(top[j0][0]) * tau)
                          * q_evaluate(top[j0][1], tau))
                rest = sum(abs(cmath.exp(TWO_PI_I * float(mu) * tau)
                               * q_evaluate(g, tau))
                           for j, (mu, g) in enumerate(top) if j != j0)
                if not dom > 2 * rest:
                    raise TruncationUnreliable(
                        f"domination grid check failed at tau = {tau}")
    return y0


# ---------------------------------------------------------------------------
# growth probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GrowthFit:
    """Least-squares slope of log|phi_u(g(tau0+N))| against log N."""

    slope: float
    intercept: float
    stderr: float
    N_range: tuple
    y0: float
    points: int = 0


def growth_probe(form: VvmfForm, u: int, g: UnimodularMatrix, tau0: complex,
                 n_max: int) -> GrowthFit:
    """Probe the growth exponent of component u along g(tau0 + N), N -> infinity.

    g must move infinity to a finite rational (c != 0).  Values are obtained
    through the transformation law, so the series are only ever evaluated at
    tau0 + N with Im = Im tau0; the fit uses N in [n_max/2, n_max] and drops
    points whose truncation-tail bound exceeds 1e-3 of the magnitude.
    """
    a, b, c, d = g.entries()
    if c == 0:
        raise DomainError("growth probe requires c != 0 so that g(tau+N) -> a/c")
    if not 0 <= u < form.p:
        raise IndexError(f"component index {u} outside 0..{form.p - 1}")
    tau0 = complex(tau0)
    if tau0.imag <= 0:
        raise DomainError("tau0 must lie in the upper half-plane")
    rho_g = rep_evaluate(form.rep, g)
    row = [as_complex(x) for x in rho_g.row(u)]
    xs, ys = [], []
    lo = max(1, n_max // 2)
    for N in range(lo, n_max + 1):
        tauN = tau0 + N
        comps = form.evaluate_components(tauN)
        inner = sum(r * x for r, x in zip(row, comps))
        tail = form.tail_bound(tauN) * max(abs(r) for r in row)
        if abs(inner) < 1e-300:
            continue
        if tail > 1e-3 * abs(inner):
            continue
        val = abs((c * tauN + d) ** form.k * inner)
        if val < 1e-300 or not math.isfinite(val):
            continue
        xs.append(math.log(N))
        ys.append(math.log(val))
    if len(xs) < 3:
        raise DegenerateFit(f"only {len(xs)} usable points in [{lo}, {n_max}]")
    coeffs, cov = np.polyfit(xs, ys, 1, cov=True)
    return GrowthFit(slope=float(coeffs[0]), intercept=float(coeffs[1]),
                     stderr=float(math.sqrt(max(cov[0, 0], 0.0))),
                     N_range=(lo, n_max), y0=tau0.imag, points=len(xs))


# ---------------------------------------------------------------------------
# Bol's identity
# ---------------------------------------------------------------------------

def _falling(n: int, r: int) -> int:
    out = 1
    for i in range(r):
        out *= n - i
    return out


def _slash_numerator(f, g: UnimodularMatrix):
    """f(g tau) = N(tau) (c tau + d)^{-deg f} with N returned here."""
    a, b, c, d = g.entries()
    num_lin = poly([b, a])
    den_lin = poly([d, c])
    D = poly_deg(f)
    N = ()
    for j, coeff in enumerate(f):
        if not coeff:
            continue
        N = poly_add(N, poly_scale(poly_mul(poly_pow(num_lin, j),
                                            poly_pow(den_lin, D - j)), coeff))
    return N, D


def _bol_poly_residual(f, g: UnimodularMatrix, M: int, tau_samples):
    """Exact two-sided comparison for polynomial phi."""
    a, b, c, d = g.entries()
    den_lin = poly([d, c])
    # left side: differentiate N(tau) v^e, v = c tau + d, M times
    N, D = _slash_numerator(f, g)
    e = M - 1 - D
    P = N
    for _ in range(M):
        # d/dtau (P v^e) = (P' v + e c P) v^{e-1}
        P = poly_add(poly_mul(poly_derivative(P), den_lin),
                     poly_scale(P, QI(e * c)))
        e -= 1
    # right side: v^{-1-M} phi^{(M)}(g tau)
    fM = f
    for _ in range(M):
        fM = poly_derivative(fM)
    N2, D2 = _slash_numerator(fM, g) if fM else ((), -1)
    e2 = -1 - M - D2 if fM else 0
    # compare P v^e against N2 v^{e2} by cross-multiplying to a common power
    m = min(e, e2)
    lhs = poly_mul(P, poly_pow(den_lin, e - m))
    rhs = poly_mul(N2, poly_pow(den_lin, e2 - m))
    diff = poly_add(lhs, poly_scale(rhs, QI(-1)))
    if not diff:
        return 0.0
    worst = max(abs(complex(x)) for x in diff)
    for tau in tau_samples:
        worst = max(worst, abs(poly_eval(diff, complex(tau))))
    return worst


def _bol_series_residual(h: PureQSeries, g: UnimodularMatrix, M: int, tau_samples):
    """Symbolic Leibniz/chain-rule expansion for a q-series phi.

    Terms are kept as coeff * psi_r(tau) * v^e with psi_r = phi^{(r)} o g and
    v = c tau + d; differentiation acts by
    d/dtau [psi_r v^e] = psi_{r+1} v^{e-2} + e c psi_r v^{e-1}.
    """
    a, b, c, d = g.entries()
    terms = {(0, M - 1): Fraction(1)}
    for _ in range(M):
        nxt = {}
        for (r, e), coeff in terms.items():
            key1 = (r + 1, e - 2)
            nxt[key1] = nxt.get(key1, Fraction(0)) + coeff
            if e:
                key2 = (r, e - 1)
                nxt[key2] = nxt.get(key2, Fraction(0)) + coeff * e * c
        terms = {k: v for k, v in nxt.items() if v}
    # phi^{(r)} for every r encountered
    max_r = max(r for r, _ in terms)
    derivs = [h]
    for _ in range(max_r):
        derivs.append(q_derivative(derivs[-1]))
    worst = 0.0
    for tau in tau_samples:
        tau = complex(tau)
        gt = moebius(g, tau)
        tails = sum(q_tail_bound(dd, gt) for dd in derivs)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", TruncationWarning)
            scale = max(1.0, abs(q_evaluate(h, tau)))
            if tails > 1e-8 * scale:
                raise TruncationUnreliable(
                    f"derivative tails {tails:.3g} too large at g(tau) = {gt}")
            v = c * tau + d
            psi = [q_evaluate(dd, gt) for dd in derivs]
        lhs = sum(float(coeff) * psi[r] * v ** e for (r, e), coeff in terms.items())
        rhs = v ** (-1 - M) * psi[M]
        worst = max(worst, abs(lhs - rhs))
    return worst


def bol_check(phi, g: UnimodularMatrix, M: int, tau_samples) -> float:
    """Residual of D^M((c tau+d)^{M-1} phi(g tau)) = (c tau+d)^{-1-M} phi^{(M)}(g tau).

    phi may be a polynomial (coefficient sequence; exact, residual exactly 0.0)
    or a PureQSeries (symbolic term-rule derivatives, evaluated numerically).
    """
    if M < 1:
        raise ValueError("M must be a positive integer")
    if isinstance(phi, PureQSeries):
        return _bol_series_residual(phi, g, M, tau_samples)
    return _bol_poly_residual(poly(phi), g, M, tau_samples)


# ---------------------------------------------------------------------------
# flatness of differentiated exponential sums
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FlatnessVerdict:
    flat: bool
    constants: tuple = ()
    witness: tuple | None = None   # (term index, n) with (n + mu) != 0


def exp_sum_flatness(terms, M: int) -> FlatnessVerdict:
    """Does the M-fold derivative of sum_j e^{2 pi i mu_j tau} g_j(tau) vanish?

    Each retained coefficient picks up (2 pi i (n + mu_j))^M, so the sum is
    flat iff every coefficient sits at exponent n + mu = 0; the offsets must
    then vanish and each g_j collapses to its constant term.
    """
    if M < 1:
        raise ValueError("M must be a positive integer")
    mus = [Fraction(mu) for mu, _ in terms]
    if len(set(mus)) != len(mus):
        raise ValueError("offsets must be pairwise distinct")
    constants = []
    for j, (mu, g) in enumerate(terms):
        mu = Fraction(mu)
        for n, a in g.terms():
            if a and n + mu != 0:
                return FlatnessVerdict(flat=False, witness=(j, n))
        constants.append(g.coeff(0) if mu == 0 else 0)
    return FlatnessVerdict(flat=True, constants=tuple(constants))
