"""JSON wire formats.

Group elements are [[a, b], [c, d]] with decimal integer strings; exact matrix
scalars are "a/b+c/d i" strings and floating scalars [re, im] pairs; q-series
coefficients travel as [re, im] pairs.  Decoding errors mention the offending
field so callers can produce pointed diagnostics.
"""

from __future__ import annotations

from fractions import Fraction

from .analysis import GrowthFit
from .fixtures import FixtureSeries
from .linalg import EXACT, FLOAT, Matrix, QI, as_complex, format_exact_scalar, \
    is_exact_scalar, parse_exact_scalar, to_qi
from .modgroup import UnimodularMatrix
from .qexp import LogBlock, PureQSeries
from .repspace import Representation
from .vvmf import (BODY_LOGBLOCKS, BODY_POLY, BODY_SCALARS, Classification,
                   PolyVector, VvmfForm)


class DecodeError(ValueError):
    def __init__(self, field, message):
        super().__init__(f"field {field!r}: {message}")
        self.field = field


def _expect(obj, field, types, where):
    if field not in obj:
        raise DecodeError(f"{where}.{field}", "missing")
    val = obj[field]
    if types is not None and not isinstance(val, types):
        raise DecodeError(f"{where}.{field}",
                          f"expected {types}, got {type(val).__name__}")
    return val


# -- group elements ---------------------------------------------------------

def gamma_to_json(g: UnimodularMatrix):
    return [[str(g.a), str(g.b)], [str(g.c), str(g.d)]]


def gamma_from_json(obj, where="gamma") -> UnimodularMatrix:
    try:
        (a, b), (c, d) = obj
        return UnimodularMatrix(int(a), int(b), int(c), int(d))
    except (TypeError, ValueError) as e:
        raise DecodeError(where, f"not a [[a,b],[c,d]] integer-string matrix: {e}")


# -- scalars and matrices ---------------------------------------------------

def scalar_to_json(x):
    if is_exact_scalar(x):
        return format_exact_scalar(x if isinstance(x, QI) else QI(x))
    z = as_complex(x)
    return [z.real, z.imag]


def scalar_from_json(obj, where="scalar"):
    if isinstance(obj, str):
        try:
            return parse_exact_scalar(obj)
        except ValueError as e:
            raise DecodeError(where, str(e))
    if isinstance(obj, (list, tuple)) and len(obj) == 2:
        return complex(float(obj[0]), float(obj[1]))
    if isinstance(obj, (int, float)):
        return complex(obj)
    raise DecodeError(where, "expected 'a/b+c/d i' string or [re, im] pair")


def matrix_to_json(M: Matrix):
    if M.backend == EXACT:
        return [[format_exact_scalar(e) for e in row] for row in M.rows]
    return [[[z.real, z.imag] for z in row] for row in M.arr]


def matrix_from_json(obj, where="matrix") -> Matrix:
    if not isinstance(obj, list) or not obj:
        raise DecodeError(where, "expected a non-empty list of rows")
    entries = [[scalar_from_json(e, f"{where}[{i}][{j}]")
                for j, e in enumerate(row)] for i, row in enumerate(obj)]
    kinds = {isinstance(e, QI) for row in entries for e in row}
    if kinds == {True}:
        return Matrix.exact(entries)
    if kinds == {False}:
        return Matrix.from_float([[complex(e) for e in row] for row in entries])
    raise DecodeError(where, "mixed exact and floating entries in one matrix")


# -- representations --------------------------------------------------------

def rep_to_json(rep: Representation):
    return {"p": rep.p, "backend": rep.backend,
            "S": matrix_to_json(rep.S_img), "T": matrix_to_json(rep.T_img)}


def rep_from_json(obj, where="rep") -> Representation:
    p = _expect(obj, "p", int, where)
    backend = _expect(obj, "backend", str, where)
    if backend not in (EXACT, FLOAT):
        raise DecodeError(f"{where}.backend", f"unknown backend {backend!r}")
    S_img = matrix_from_json(_expect(obj, "S", list, where), f"{where}.S")
    T_img = matrix_from_json(_expect(obj, "T", list, where), f"{where}.T")
    if S_img.backend != backend:
        raise DecodeError(f"{where}.S", f"entries do not match backend {backend!r}")
    if S_img.shape != (p, p) or T_img.shape != (p, p):
        raise DecodeError(f"{where}.p", "matrix shapes do not match p")
    return Representation(S_img, T_img)


# -- q-series and blocks ----------------------------------------------------

def series_to_json(h: PureQSeries):
    return {"mu": str(h.mu), "nu": h.nu,
            "coeffs": [[as_complex(a).real, as_complex(a).imag] for a in h.coeffs],
            "exact": h.exact}


def series_from_json(obj, where="series") -> PureQSeries:
    mu_s = _expect(obj, "mu", str, where)
    try:
        mu = Fraction(mu_s)
    except ValueError:
        raise DecodeError(f"{where}.mu", f"not a rational: {mu_s!r}")
    nu = _expect(obj, "nu", int, where)
    coeffs = _expect(obj, "coeffs", list, where)
    exact = _expect(obj, "exact", bool, where)
    vals = []
    for i, c in enumerate(coeffs):
        if not isinstance(c, (list, tuple)) or len(c) != 2:
            raise DecodeError(f"{where}.coeffs[{i}]", "expected [re, im]")
        vals.append(complex(float(c[0]), float(c[1])))
    try:
        return PureQSeries.make(mu, nu, vals, exact)
    except ValueError as e:
        raise DecodeError(where, str(e))


def block_to_json(b: LogBlock):
    return {"mu": str(b.mu), "m": b.m, "h": [series_to_json(h) for h in b.h]}


def block_from_json(obj, where="block") -> LogBlock:
    mu = Fraction(_expect(obj, "mu", str, where))
    hs = [series_from_json(h, f"{where}.h[{i}]")
          for i, h in enumerate(_expect(obj, "h", list, where))]
    try:
        return LogBlock.make(mu, hs)
    except Exception as e:
        raise DecodeError(where, str(e))


# -- forms -------------------------------------------------------------------

def form_to_json(form: VvmfForm):
    if form.body_kind == BODY_POLY:
        body = {"kind": BODY_POLY,
                "components": [[scalar_to_json(c) for c in comp]
                               for comp in form.body.components]}
    elif form.body_kind == BODY_LOGBLOCKS:
        body = {"kind": BODY_LOGBLOCKS,
                "blocks": [block_to_json(b) for b in form.body]}
    else:
        body = {"kind": BODY_SCALARS,
                "series": [series_to_json(h) for h in form.body]}
    return {"k": form.k, "rep": rep_to_json(form.rep), "body": body}


def form_from_json(obj, where="form") -> VvmfForm:
    k = _expect(obj, "k", int, where)
    rep = rep_from_json(_expect(obj, "rep", dict, where), f"{where}.rep")
    body = _expect(obj, "body", dict, where)
    kind = _expect(body, "kind", str, f"{where}.body")
    if kind == BODY_POLY:
        comps = _expect(body, "components", list, f"{where}.body")
        decoded = [[scalar_from_json(c, f"{where}.body.components[{i}][{j}]")
                    for j, c in enumerate(comp)] for i, comp in enumerate(comps)]
        try:
            pv = PolyVector.make([[to_qi(c) for c in comp] for comp in decoded])
        except (TypeError, ValueError) as e:
            raise DecodeError(f"{where}.body.components", str(e))
        return VvmfForm(k, rep, pv, BODY_POLY)
    if kind == BODY_LOGBLOCKS:
        blocks = tuple(block_from_json(b, f"{where}.body.blocks[{i}]")
                       for i, b in enumerate(_expect(body, "blocks", list,
                                                     f"{where}.body")))
        return VvmfForm(k, rep, blocks, BODY_LOGBLOCKS)
    if kind == BODY_SCALARS:
        series = tuple(series_from_json(h, f"{where}.body.series[{i}]")
                       for i, h in enumerate(_expect(body, "series", list,
                                                     f"{where}.body")))
        return VvmfForm(k, rep, series, BODY_SCALARS)
    raise DecodeError(f"{where}.body.kind", f"unknown body kind {kind!r}")


# -- results -----------------------------------------------------------------

def classification_to_json(c: Classification):
    out = {"verdict": c.verdict, "span": c.span,
           "witness": matrix_to_json(c.witness) if c.witness is not None else None,
           "basis_indices": list(c.basis_indices),
           "certificate": None,
           "component_polynomial": list(c.component_polynomial),
           "notes": list(c.notes)}
    if c.certificate is not None:
        bi, s, n = c.certificate
        out["certificate"] = {"block": bi, "s": s, "n": n}
    return out


def growthfit_to_json(fit: GrowthFit, echo=None):
    out = {"slope": fit.slope, "intercept": fit.intercept, "stderr": fit.stderr,
           "N_range": list(fit.N_range), "y0": fit.y0, "points": fit.points}
    if echo:
        out.update(echo)
    return out


def fixture_to_json(fix: FixtureSeries):
    return {"name": fix.name, "weight": fix.weight,
            "series": series_to_json(fix.series)}


def fixture_from_json(obj, where="fixture") -> FixtureSeries:
    return FixtureSeries(
        _expect(obj, "name", str, where),
        _expect(obj, "weight", int, where),
        series_from_json(_expect(obj, "series", dict, where), f"{where}.series"))
