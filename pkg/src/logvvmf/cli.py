"""Thin command-line client.

Subcommands mirror the service endpoints one-to-one: each builds the same
request model and either calls the handler in-process (default) or POSTs it
to a running server given with --server.  JSON in on stdin, JSON out on
stdout; exit code 0 on success/pass, 1 on a failed check, 2 on input errors.
"""

from __future__ import annotations

import json
import sys

import click
from pydantic import ValidationError

from .errors import LogVvmfError
from .serialize import DecodeError
from .service import ROUTES


def _fail_input(message: str):
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _read_stdin_json():
    raw = sys.stdin.read()
    try:
        return json.loads(raw)
    except json.JSONDecodeError as e:
        _fail_input(f"malformed JSON on stdin: {e}")


def _parse_gamma(text: str):
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        _fail_input(f"--gamma expects 'a,b,c,d', got {text!r}")
    return [[parts[0], parts[1]], [parts[2], parts[3]]]


def _parse_tau(text: str) -> complex:
    try:
        z = complex(text.strip().replace(" ", "").replace("i", "j"))
    except ValueError:
        _fail_input(f"--tau expects 'x+yi', got {text!r}")
    return z


def _dispatch(ctx, path: str, payload: dict) -> dict:
    server = ctx.obj.get("server")
    if server:
        import httpx
        resp = httpx.post(server.rstrip("/") + path, json=payload, timeout=600.0)
        if resp.status_code >= 400:
            try:
                detail = resp.json().get("detail", resp.text)
            except ValueError:
                detail = resp.text
            _fail_input(f"server rejected request: {detail}")
        return resp.json()
    model_cls, handler = ROUTES[path]
    try:
        req = model_cls(**payload)
    except ValidationError as e:
        _fail_input(str(e))
    try:
        return handler(req)
    except DecodeError as e:
        _fail_input(str(e))
    except LogVvmfError as e:
        _fail_input(f"{type(e).__name__}: {e}")
    except (ValueError, IndexError, ZeroDivisionError) as e:
        _fail_input(f"{type(e).__name__}: {e}")


def _emit(ctx, obj, exit_code=0):
    indent = 2 if ctx.obj.get("pretty") else None
    click.echo(json.dumps(obj, indent=indent))
    sys.exit(exit_code)


@click.group()
@click.option("--server", envvar="LOGVVMF_SERVER", default=None,
              help="Base URL of a running service; defaults to in-process calls.")
@click.option("--pretty", is_flag=True, help="Indent JSON output.")
@click.pass_context
def main(ctx, server, pretty):
    """Logarithmic vector-valued modular forms toolbox."""
    ctx.ensure_object(dict)
    ctx.obj["server"] = server
    ctx.obj["pretty"] = pretty


# -- gen -----------------------------------------------------------------------

@main.group()
def gen():
    """Generate canonical objects (representations, forms, fixtures)."""


@gen.command("sym-power")
@click.option("--p", type=int, required=True)
@click.pass_context
def gen_sym_power(ctx, p):
    _emit(ctx, _dispatch(ctx, "/gen/sym-power", {"p": p}))


@gen.command("sigma")
@click.option("--p", type=int, required=True)
@click.pass_context
def gen_sigma(ctx, p):
    _emit(ctx, _dispatch(ctx, "/gen/sigma", {"p": p}))


@gen.command("C")
@click.option("--p", type=int, required=True)
@click.pass_context
def gen_c(ctx, p):
    _emit(ctx, _dispatch(ctx, "/gen/c", {"p": p}))


@gen.command("eisenstein")
@click.option("--weight", type=int, required=True)
@click.option("--terms", type=int, default=60, show_default=True)
@click.pass_context
def gen_eisenstein(ctx, weight, terms):
    _emit(ctx, _dispatch(ctx, "/gen/eisenstein", {"weight": weight, "terms": terms}))


@gen.command("delta")
@click.option("--terms", type=int, default=60, show_default=True)
@click.pass_context
def gen_delta(ctx, terms):
    _emit(ctx, _dispatch(ctx, "/gen/delta", {"terms": terms}))


# -- check ----------------------------------------------------------------------

@main.group()
def check():
    """Run verification suites; exit 1 when the check fails."""


@check.command("relations")
@click.option("--tol", type=float, default=1e-9, show_default=True)
@click.pass_context
def check_relations(ctx, tol):
    """Check S^4 = I and (ST)^3 = S^2 for a representation JSON on stdin."""
    rep = _read_stdin_json()
    out = _dispatch(ctx, "/check/relations", {"rep": rep, "tol": tol})
    _emit(ctx, out, 0 if out.get("ok") else 1)


@check.command("funceq")
@click.option("--gamma", "gammas", multiple=True,
              help="Explicit 'a,b,c,d'; repeatable. Default: seeded random.")
@click.option("--count", type=int, default=20, show_default=True)
@click.option("--entry-bound", type=int, default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tau", "taus", multiple=True, help="Sample points 'x+yi'.")
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.pass_context
def check_funceq(ctx, gammas, count, entry_bound, seed, taus, tol):
    """Check F|_k gamma = rho(gamma) F for a form JSON on stdin."""
    form = _read_stdin_json()
    payload = {"form": form, "count": count, "entry_bound": entry_bound,
               "seed": seed, "tol": tol}
    if gammas:
        payload["gammas"] = [_parse_gamma(g) for g in gammas]
    if taus:
        payload["taus"] = [[z.real, z.imag] for z in map(_parse_tau, taus)]
    out = _dispatch(ctx, "/check/funceq", payload)
    _emit(ctx, out, 0 if out.get("ok") else 1)


@check.command("bol")
@click.option("--gamma", default="0,-1,1,0", show_default=True)
@click.option("--order", "-M", "order", type=int, required=True,
              help="Number of derivatives M.")
@click.option("--tau", "taus", multiple=True)
@click.option("--tol", type=float, default=1e-8, show_default=True)
@click.pass_context
def check_bol(ctx, gamma, order, taus, tol):
    """Check the Bol identity for a polynomial or q-series phi on stdin."""
    phi = _read_stdin_json()
    payload = {"phi": phi, "gamma": _parse_gamma(gamma), "M": order, "tol": tol}
    if taus:
        payload["taus"] = [[z.real, z.imag] for z in map(_parse_tau, taus)]
    out = _dispatch(ctx, "/check/bol", payload)
    _emit(ctx, out, 0 if out.get("ok") else 1)


@check.command("translation")
@click.option("--tau", "taus", multiple=True)
@click.option("--tol", type=float, default=1e-10, show_default=True)
@click.pass_context
def check_translation(ctx, taus, tol):
    """Check F(tau+1) = rho(T) F(tau) for blocks or a form on stdin."""
    obj = _read_stdin_json()
    payload = {"tol": tol}
    if isinstance(obj, list):
        payload["blocks"] = obj
    else:
        payload["form"] = obj
    if taus:
        payload["taus"] = [[z.real, z.imag] for z in map(_parse_tau, taus)]
    out = _dispatch(ctx, "/check/translation", payload)
    _emit(ctx, out, 0 if out.get("ok") else 1)


# -- classify / probe / intertwine ----------------------------------------------

@main.command()
@click.option("--verify-funceq", is_flag=True,
              help="Numerically verify the functional equation first.")
@click.pass_context
def classify(ctx, verify_funceq):
    """Classify a form JSON on stdin: Entire, NaturalBoundary, or Zero."""
    form = _read_stdin_json()
    out = _dispatch(ctx, "/classify", {"form": form, "verify_funceq": verify_funceq})
    _emit(ctx, out)


@main.command()
@click.option("--gamma", default="0,-1,1,0", show_default=True)
@click.option("--component", type=int, default=0, show_default=True)
@click.option("--tau0", default="0.3+1.5i", show_default=True)
@click.option("--nmax", type=int, default=200, show_default=True)
@click.pass_context
def probe(ctx, gamma, component, tau0, nmax):
    """Fit the growth exponent of a component near gamma(infinity) = a/c."""
    form = _read_stdin_json()
    z = _parse_tau(tau0)
    payload = {"form": form, "component": component, "gamma": _parse_gamma(gamma),
               "tau0": [z.real, z.imag], "nmax": nmax}
    _emit(ctx, _dispatch(ctx, "/probe", payload))


@main.command()
@click.option("--seed", type=int, default=0, show_default=True)
@click.pass_context
def intertwine(ctx, seed):
    """Find an invertible A with A rho = rho' A for {'rep1':..,'rep2':..} on stdin."""
    obj = _read_stdin_json()
    if not isinstance(obj, dict) or "rep1" not in obj or "rep2" not in obj:
        _fail_input("stdin must be a JSON object with 'rep1' and 'rep2'")
    payload = {"rep1": obj["rep1"], "rep2": obj["rep2"], "seed": seed}
    out = _dispatch(ctx, "/intertwine", payload)
    _emit(ctx, out, 0 if out.get("found") else 1)


if __name__ == "__main__":
    main()
