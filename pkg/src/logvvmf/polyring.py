"""Exact univariate polynomials over Q(i), stored as ascending coefficient tuples.

The zero polynomial is the empty tuple.  These are the coefficient-level
workhorses behind the slash action on polynomial vectors and the symbolic side
of the Bol identity check.
"""

from __future__ import annotations

from .linalg import QI, as_complex


def poly(coeffs) -> tuple:
    """Build a trimmed polynomial from any iterable of scalars."""
    out = [c if isinstance(c, QI) else QI(c) for c in coeffs]
    while out and not out[-1]:
        out.pop()
    return tuple(out)


def poly_deg(p) -> int:
    """Degree, with deg 0 = -1 for the zero polynomial."""
    return len(p) - 1


def poly_add(p, q):
    n = max(len(p), len(q))
    out = [QI(0)] * n
    for i, c in enumerate(p):
        out[i] = out[i] + c
    for i, c in enumerate(q):
        out[i] = out[i] + c
    return poly(out)


def poly_sub(p, q):
    return poly_add(p, poly_scale(q, QI(-1)))


def poly_scale(p, c):
    c = c if isinstance(c, QI) else QI(c)
    if not c:
        return ()
    return poly(cc * c for cc in p)


def poly_mul(p, q):
    if not p or not q:
        return ()
    out = [QI(0)] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            out[i + j] = out[i + j] + a * b
    return poly(out)


def poly_pow(p, n: int):
    result = poly([1])
    for _ in range(n):
        result = poly_mul(result, p)
    return result


def poly_derivative(p):
    return poly(QI(i) * c for i, c in enumerate(p) if i >= 1)


def poly_eval(p, x):
    """Evaluate via Horner; exact when x is exact, complex otherwise."""
    if isinstance(x, QI) or isinstance(x, int):
        acc = QI(0)
        xx = QI(x)
        for c in reversed(p):
            acc = acc * xx + c
        return acc
    z = complex(x)
    acc = 0j
    for c in reversed(p):
        acc = acc * z + as_complex(c)
    return acc


def poly_divmod(num, den):
    """Exact polynomial division: num = q * den + r with deg r < deg den."""
    if not den:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(num)
    q = [QI(0)] * max(len(num) - len(den) + 1, 0)
    dlead = den[-1]
    dd = len(den) - 1
    while len(r) - 1 >= dd and any(r):
        while r and not r[-1]:
            r.pop()
        if len(r) - 1 < dd:
            break
        f = r[-1] / dlead
        shift = len(r) - 1 - dd
        q[shift] = f
        for i, c in enumerate(den):
            r[shift + i] = r[shift + i] - f * c
    return poly(q), poly(r)


def binom_poly(s: int):
    """Coefficients of tau -> binom(tau, s) = tau(tau-1)...(tau-s+1)/s!."""
    p = poly([1])
    fact = 1
    for j in range(s):
        p = poly_mul(p, poly([-j, 1]))
        fact *= j + 1
    return poly_scale(p, QI(1) / QI(fact))
