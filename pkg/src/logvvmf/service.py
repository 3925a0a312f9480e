"""FastAPI service wrapping the library.

Every operation is a stateless POST taking and returning the JSON wire
formats of `serialize`.  The handler functions accept the validated pydantic
request models directly, so the CLI can invoke them in-process without a
running server.
"""

from __future__ import annotations

import random

from fastapi import FastAPI, HTTPException
from pydantic import BaseModel, Field

from . import analysis, fixtures, serialize
from .errors import LogVvmfError
from .linalg import EXACT
from .modgroup import random_unimodular
from .qexp import translation_residual
from .repspace import (find_intertwiner, relation_residual, sigma_rep,
                       sym_power_rep)
from .serialize import DecodeError
from .vvmf import classify_boundary, functional_equation_residual, make_C

DEFAULT_TAUS = [[0.3, 1.5], [0.1, 2.0]]


# -- request models -----------------------------------------------------------

class DimensionRequest(BaseModel):
    p: int = Field(ge=1, le=64)


class EisensteinRequest(BaseModel):
    weight: int
    terms: int = Field(default=60, ge=1, le=4000)


class DeltaRequest(BaseModel):
    terms: int = Field(default=60, ge=1, le=4000)


class RelationsRequest(BaseModel):
    rep: dict
    tol: float = 1e-9


class FunceqRequest(BaseModel):
    form: dict
    gammas: list | None = None
    count: int = Field(default=20, ge=1, le=10000)
    entry_bound: int = Field(default=50, ge=1)
    seed: int = 0
    taus: list = DEFAULT_TAUS
    tol: float = 1e-8


class BolRequest(BaseModel):
    phi: dict
    gamma: list
    M: int = Field(ge=1, le=16)
    taus: list = [[0.0, 1.0], [0.0, 2.0], [0.4, 1.3]]
    tol: float = 1e-8


class TranslationRequest(BaseModel):
    blocks: list | None = None
    form: dict | None = None
    taus: list = [[0.11, 1.3], [-0.4, 2.2]]
    tol: float = 1e-10


class ClassifyRequest(BaseModel):
    form: dict
    verify_funceq: bool = False


class ProbeRequest(BaseModel):
    form: dict
    component: int = Field(default=0, ge=0)
    gamma: list = [["0", "-1"], ["1", "0"]]
    tau0: list = [0.3, 1.5]
    nmax: int = Field(default=200, ge=8, le=100000)


class IntertwineRequest(BaseModel):
    rep1: dict
    rep2: dict
    seed: int = 0


# -- shared decode helpers ----------------------------------------------------

def _coerce_form(obj, where="form"):
    """Accept a VvmfForm JSON or a FixtureSeries JSON (wrapped as a 1-dim form)."""
    if isinstance(obj, dict) and "body" in obj:
        return serialize.form_from_json(obj, where)
    if isinstance(obj, dict) and "series" in obj and "weight" in obj:
        return fixtures.fixture_form(serialize.fixture_from_json(obj, where))
    raise DecodeError(where, "expected a form (with 'body') or fixture "
                             "(with 'weight' and 'series')")


def _taus(raw, where="taus"):
    out = []
    for i, t in enumerate(raw):
        if not isinstance(t, (list, tuple)) or len(t) != 2:
            raise DecodeError(f"{where}[{i}]", "expected [re, im]")
        out.append(complex(float(t[0]), float(t[1])))
    return out


# -- handlers ------------------------------------------------------------------

def gen_sym_power(req: DimensionRequest):
    return serialize.rep_to_json(sym_power_rep(req.p))


def gen_sigma(req: DimensionRequest):
    return serialize.rep_to_json(sigma_rep(req.p))


def gen_c(req: DimensionRequest):
    return serialize.form_to_json(make_C(req.p))


def gen_eisenstein(req: EisensteinRequest):
    return serialize.fixture_to_json(fixtures.gen_eisenstein(req.weight, req.terms))


def gen_delta(req: DeltaRequest):
    return serialize.fixture_to_json(fixtures.gen_cusp_delta(req.terms))


def check_relations(req: RelationsRequest):
    obj = req.rep
    S_img = serialize.matrix_from_json(
        obj.get("S") if isinstance(obj, dict) else None, "rep.S")
    T_img = serialize.matrix_from_json(
        obj.get("T") if isinstance(obj, dict) else None, "rep.T")
    residual = relation_residual(S_img, T_img)
    tol = 0.0 if S_img.backend == EXACT else req.tol
    return {"ok": bool(residual <= tol), "residual": float(residual)}


def check_funceq(req: FunceqRequest):
    form = _coerce_form(req.form)
    taus = _taus(req.taus)
    if req.gammas is not None:
        gammas = [serialize.gamma_from_json(g, f"gammas[{i}]")
                  for i, g in enumerate(req.gammas)]
    else:
        rng = random.Random(req.seed)
        gammas = [random_unimodular(rng, req.entry_bound) for _ in range(req.count)]
    worst = 0.0
    for g in gammas:
        worst = max(worst, functional_equation_residual(form, g, taus))
    return {"ok": bool(worst <= req.tol), "residual": float(worst),
            "count": len(gammas)}


def check_bol(req: BolRequest):
    g = serialize.gamma_from_json(req.gamma, "gamma")
    taus = _taus(req.taus)
    kind = req.phi.get("kind") if isinstance(req.phi, dict) else None
    if kind is None and isinstance(req.phi, dict) and "mu" in req.phi:
        kind = "series"
    if kind == "poly":
        coeffs = [serialize.scalar_from_json(c, f"phi.coeffs[{i}]")
                  for i, c in enumerate(req.phi.get("coeffs", []))]
        from .linalg import to_qi
        phi = [to_qi(c) for c in coeffs]
    elif kind == "series":
        phi = serialize.series_from_json(req.phi, "phi")
    else:
        raise DecodeError("phi.kind", "expected 'poly' or 'series'")
    residual = analysis.bol_check(phi, g, req.M, taus)
    return {"ok": bool(residual <= req.tol), "residual": float(residual)}


def check_translation(req: TranslationRequest):
    if req.blocks is not None:
        blocks = [serialize.block_from_json(b, f"blocks[{i}]")
                  for i, b in enumerate(req.blocks)]
    elif req.form is not None:
        blocks = _coerce_form(req.form).blocks()
    else:
        raise DecodeError("blocks", "provide 'blocks' or 'form'")
    residual = translation_residual(blocks, _taus(req.taus))
    return {"ok": bool(residual <= req.tol), "residual": float(residual)}


def classify(req: ClassifyRequest):
    form = _coerce_form(req.form)
    result = classify_boundary(form, verify_funceq=req.verify_funceq)
    return serialize.classification_to_json(result)


def probe(req: ProbeRequest):
    form = _coerce_form(req.form)
    g = serialize.gamma_from_json(req.gamma, "gamma")
    tau0 = complex(float(req.tau0[0]), float(req.tau0[1]))
    fit = analysis.growth_probe(form, req.component, g, tau0, req.nmax)
    echo = {"gamma": serialize.gamma_to_json(g), "tau0": [tau0.real, tau0.imag],
            "nmax": req.nmax, "component": req.component}
    return serialize.growthfit_to_json(fit, echo)


def intertwine(req: IntertwineRequest):
    rho = serialize.rep_from_json(req.rep1, "rep1")
    rho2 = serialize.rep_from_json(req.rep2, "rep2")
    A = find_intertwiner(rho, rho2, seed=req.seed)
    if A is None:
        return {"found": False, "A": None}
    return {"found": True, "A": serialize.matrix_to_json(A)}


# -- FastAPI surface -----------------------------------------------------------

app = FastAPI(
    title="logvvmf",
    description="Logarithmic vector-valued modular forms: construction, "
                "checks, boundary classification, and growth probes.")


def _run(handler, req):
    try:
        return handler(req)
    except DecodeError as e:
        raise HTTPException(status_code=400,
                            detail={"error": "DecodeError", "message": str(e)})
    except LogVvmfError as e:
        raise HTTPException(status_code=422,
                            detail={"error": type(e).__name__, "message": str(e)})
    except (ValueError, IndexError, ZeroDivisionError) as e:
        raise HTTPException(status_code=422,
                            detail={"error": type(e).__name__, "message": str(e)})


@app.get("/health")
def health():
    return {"status": "ok"}


@app.post("/gen/sym-power")
def ep_gen_sym_power(req: DimensionRequest):
    return _run(gen_sym_power, req)


@app.post("/gen/sigma")
def ep_gen_sigma(req: DimensionRequest):
    return _run(gen_sigma, req)


@app.post("/gen/c")
def ep_gen_c(req: DimensionRequest):
    return _run(gen_c, req)


@app.post("/gen/eisenstein")
def ep_gen_eisenstein(req: EisensteinRequest):
    return _run(gen_eisenstein, req)


@app.post("/gen/delta")
def ep_gen_delta(req: DeltaRequest):
    return _run(gen_delta, req)


@app.post("/check/relations")
def ep_check_relations(req: RelationsRequest):
    return _run(check_relations, req)


@app.post("/check/funceq")
def ep_check_funceq(req: FunceqRequest):
    return _run(check_funceq, req)


@app.post("/check/bol")
def ep_check_bol(req: BolRequest):
    return _run(check_bol, req)


@app.post("/check/translation")
def ep_check_translation(req: TranslationRequest):
    return _run(check_translation, req)


@app.post("/classify")
def ep_classify(req: ClassifyRequest):
    return _run(classify, req)


@app.post("/probe")
def ep_probe(req: ProbeRequest):
    return _run(probe, req)


@app.post("/intertwine")
def ep_intertwine(req: IntertwineRequest):
    return _run(intertwine, req)


# route table shared with the thin CLI client
ROUTES = {
    "/gen/sym-power": (DimensionRequest, gen_sym_power),
    "/gen/sigma": (DimensionRequest, gen_sigma),
    "/gen/c": (DimensionRequest, gen_c),
    "/gen/eisenstein": (EisensteinRequest, gen_eisenstein),
    "/gen/delta": (DeltaRequest, gen_delta),
    "/check/relations": (RelationsRequest, check_relations),
    "/check/funceq": (FunceqRequest, check_funceq),
    "/check/bol": (BolRequest, check_bol),
    "/check/translation": (TranslationRequest, check_translation),
    "/classify": (ClassifyRequest, classify),
    "/probe": (ProbeRequest, probe),
    "/intertwine": (IntertwineRequest, intertwine),
}
