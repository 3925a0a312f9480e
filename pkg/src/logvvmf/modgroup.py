"""Exact arithmetic in SL2(Z): matrices, the upper half-plane action, and
decomposition of group elements into words in the standard generators S, T.

Entries are arbitrary-precision Python ints throughout; fixed-width arithmetic
would overflow on the words of large-entry matrices.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class UnimodularMatrix:
    """An element (a b; c d) of SL2(Z)."""

    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        if self.a * self.d - self.b * self.c != 1:
            raise ValueError(
                f"determinant must be 1, got {self.a * self.d - self.b * self.c}")

    def __neg__(self):
        return UnimodularMatrix(-self.a, -self.b, -self.c, -self.d)

    def inverse(self):
        return UnimodularMatrix(self.d, -self.b, -self.c, self.a)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def __str__(self):
        return f"({self.a},{self.b};{self.c},{self.d})"


I = UnimodularMatrix(1, 0, 0, 1)
S = UnimodularMatrix(0, -1, 1, 0)
T = UnimodularMatrix(1, 1, 0, 1)
NEG_I = UnimodularMatrix(-1, 0, 0, -1)


def T_power(n: int) -> UnimodularMatrix:
    return UnimodularMatrix(1, n, 0, 1)


def compose(g: UnimodularMatrix, h: UnimodularMatrix) -> UnimodularMatrix:
    """Matrix product g*h."""
    return UnimodularMatrix(
        g.a * h.a + g.b * h.c, g.a * h.b + g.b * h.d,
        g.c * h.a + g.d * h.c, g.c * h.b + g.d * h.d)


def moebius(g: UnimodularMatrix, tau: complex) -> complex:
    """The action g.tau = (a tau + b)/(c tau + d) on the upper half-plane."""
    tau = complex(tau)
    if tau.imag <= 0:
        raise DomainError(f"moebius requires Im tau > 0, got {tau.imag}")
    return (g.a * tau + g.b) / (g.c * tau + g.d)


@dataclass(frozen=True)
class GeneratorWord:
    """A word in S and T-powers, with an optional leading factor of -I.

    Tokens are the string "S" or a nonzero int n standing for T^n; adjacent
    T-powers are always merged and S*S is folded into the sign flag.
    """

    negate: bool
    tokens: tuple

    def __len__(self):
        return len(self.tokens)

    def __str__(self):
        parts = ["-I"] if self.negate else []
        for t in self.tokens:
            parts.append("S" if t == "S" else f"T^{t}")
        return "*".join(parts) if parts else "I"


def _normalize_tokens(negate: bool, tokens: list) -> GeneratorWord:
    out = []
    for t in tokens:
        if t == "S":
            if out and out[-1] == "S":
                out.pop()
                negate = not negate
            else:
                out.append("S")
        else:
            if t == 0:
                continue
            if out and out[-1] != "S":
                merged = out.pop() + t
                if merged != 0:
                    out.append(merged)
            else:
                out.append(t)
    return GeneratorWord(negate, tuple(out))


def word_evaluate(w: GeneratorWord) -> UnimodularMatrix:
    """Exact product of the token matrices, sign applied as -I."""
    g = NEG_I if w.negate else I
    for t in w.tokens:
        g = compose(g, S if t == "S" else T_power(t))
    return g


def word_decompose(g: UnimodularMatrix) -> GeneratorWord:
    """Write g as an S/T word via continued-fraction reduction on the bottom row.

    Produces the canonical form (optional -I) * T^q1 * S * T^q2 * S * ... with
    word length O(log max|entry|); rounding ties prefer the smaller remainder,
    then the quotient of smaller magnitude.
    """
    tokens = []
    cur = g
    while cur.c != 0:
        q0 = cur.a // cur.c
        # candidates around a/c; prefer the smaller resulting |c| after the swap
        best = min((abs(cur.a - q * cur.c), abs(q), q, q) for q in (q0, q0 + 1))
        q = best[3]
        tokens.append(q)
        tokens.append("S")
        # cur <- S^{-1} T^{-q} cur, i.e. peel g = T^q S cur'
        ap, bp = cur.a - q * cur.c, cur.b - q * cur.d
        cur = UnimodularMatrix(cur.c, cur.d, -ap, -bp)
    if cur.a == 1:
        negate = False
        tokens.append(cur.b)
    else:
        negate = True
        tokens.append(-cur.b)
    return _normalize_tokens(negate, tokens)


def _xgcd(a: int, b: int):
    """Extended gcd: returns (g, x, y) with a*x + b*y = g."""
    x0, y0, x1, y1 = 1, 0, 0, 1
    while b:
        q, r = divmod(a, b)
        a, b = b, r
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def random_unimodular(rng, bound: int) -> UnimodularMatrix:
    """A seeded random element with all entries in [-bound, bound]."""
    while True:
        c = rng.randint(-bound, bound)
        d = rng.randint(-bound, bound)
        if (c, d) == (0, 0) or math.gcd(c, d) != 1:
            continue
        g, x, y = _xgcd(d, c)
        if g == -1:
            x, y = -x, -y
        a0, b0 = x, -y   # a0*d - b0*c = 1
        # slide along (a, b) += t*(c, d) keeping entries within the bound
        lo, hi = -(10 ** 9), 10 ** 9
        for base, step in ((a0, c), (b0, d)):
            if step == 0:
                if abs(base) > bound:
                    lo, hi = 1, 0
                continue
            t1 = (-bound - base) / step
            t2 = (bound - base) / step
            lo = max(lo, math.ceil(min(t1, t2)))
            hi = min(hi, math.floor(max(t1, t2)))
        if lo > hi:
            continue
        t = rng.randint(lo, hi)
        return UnimodularMatrix(a0 + t * c, b0 + t * d, c, d)
