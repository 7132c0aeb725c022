"""Command-line front end.

Thin client over the service-layer handlers: every subcommand builds a
request document, executes it either in-process (default) or against a
running HTTP service (``--server http://host:port``), and prints the
machine-readable result document on stdout (JSON; CSV for ``bench``).
Logs and the ``verify`` pass/fail table go to stderr.

Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
3 cross-check mismatch.
"""

from __future__ import annotations

import json
import sys

import click
import httpx
from pydantic import ValidationError

from . import __version__
from .service import (
    BenchRequest,
    CoeffRequest,
    DecomposeRequest,
    UsageError,
    VerifyRequest,
    WrtRequest,
    create_app,
    handle_bench,
    handle_coeff,
    handle_decompose,
    handle_verify,
    handle_wrt,
)

EXIT_OK = 0
EXIT_VERIFY_FAILURE = 1
EXIT_USAGE = 2
EXIT_CROSS_CHECK = 3

_HANDLERS = {
    "/wrt": (WrtRequest, handle_wrt),
    "/coeff": (CoeffRequest, handle_coeff),
    "/decompose": (DecomposeRequest, handle_decompose),
    "/verify": (VerifyRequest, handle_verify),
    "/bench": (BenchRequest, handle_bench),
}


def _parse_int_list(text: str, flag: str) -> list[int]:
    values = []
    for pos, token in enumerate(text.split(","), start=1):
        token = token.strip()
        try:
            values.append(int(token))
        except ValueError:
            raise click.UsageError(
                f"{flag}: could not parse integer at position {pos} in {text!r}: {token!r}"
            )
    return values


def _parse_matrix(text: str, flag: str) -> tuple[int, int, int, int]:
    values = _parse_int_list(text, flag)
    if len(values) != 4:
        raise click.UsageError(f"{flag}: expected 4 comma-separated integers, got {len(values)}")
    return tuple(values)


def _parse_insertions(text: str) -> list[tuple[int, int]]:
    """Semicolon-separated comma pairs; empty string means no insertions."""
    if text.strip() == "":
        return []
    pairs = []
    for pos, chunk in enumerate(text.split(";"), start=1):
        parts = chunk.split(",")
        if len(parts) != 2:
            raise click.UsageError(
                f"--insertions: expected 'p,s' at pair {pos}, got {chunk!r}"
            )
        try:
            pairs.append((int(parts[0].strip()), int(parts[1].strip())))
        except ValueError:
            raise click.UsageError(
                f"--insertions: could not parse integers at pair {pos}: {chunk!r}"
            )
    return pairs


def _dispatch(route: str, payload: dict, server: str | None) -> dict:
    """Run a request in-process or against a remote service."""
    if server is not None:
        try:
            response = httpx.post(server.rstrip("/") + route, json=payload, timeout=600.0)
        except httpx.HTTPError as exc:
            raise click.ClickException(f"request to {server} failed: {exc}")
        if response.status_code == 422:
            raise click.UsageError(f"server rejected request: {response.text}")
        if response.status_code != 200:
            raise click.ClickException(
                f"server error {response.status_code}: {response.text}"
            )
        return response.json()
    model_cls, handler = _HANDLERS[route]
    try:
        request = model_cls(**payload)
        return handler(request).model_dump()
    except (ValidationError, UsageError) as exc:
        raise click.UsageError(str(exc))


def _emit(document: dict) -> None:
    click.echo(json.dumps(document, indent=2))


_server_option = click.option(
    "--server", default=None, help="Base URL of a running service; default runs in-process."
)


@click.group()
@click.version_option(version=__version__, prog_name="toruswrt")
def main() -> None:
    """Exact, dense-oracle, and simulated-circuit WRT invariant computations."""


@main.command()
@click.option("--level", type=int, required=True, help="Odd level N >= 3.")
@click.option("--monodromy", default="1,0,0,1", show_default=True, help="Row-major 'a,b,c,d'.")
@click.option(
    "--insertions",
    default="",
    help="Threaded insertions 'p1,s1;p2,s2;...'; empty for none.",
)
@click.option(
    "--method",
    type=click.Choice(["dp", "sim-exact", "sim-sample", "all"]),
    default="dp",
    show_default=True,
)
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--delta", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=None)
@_server_option
def wrt(level, monodromy, insertions, method, epsilon, delta, seed, server) -> None:
    """Compute Z_N(M_g; insertions) by the selected method(s)."""
    payload = {
        "level": level,
        "monodromy": _parse_matrix(monodromy, "--monodromy"),
        "insertions": _parse_insertions(insertions),
        "method": method,
        "epsilon": epsilon,
        "delta": delta,
        "seed": seed,
    }
    document = _dispatch("/wrt", payload, server)
    _emit(document)
    cross = document.get("cross_check")
    if cross is not None and not cross["ok"]:
        click.echo(
            f"cross-check failed: |dp - sim-exact| = {cross['max_delta']:.3e} "
            f"> {cross['tolerance']:.0e}",
            err=True,
        )
        sys.exit(EXIT_CROSS_CHECK)


@main.command()
@click.option("--a", "a_list", required=True, help="Comma-separated weights, e.g. '1,2,2'.")
@click.option("--z", type=int, default=0, show_default=True, help="Target signed sum.")
@click.option("--modulus", type=int, default=None, help="Level N; default: smallest safe level.")
@click.option(
    "--method",
    type=click.Choice(["exact", "mod", "estimate", "all"]),
    default="all",
    show_default=True,
)
@click.option(
    "--estimate-mode",
    type=click.Choice(["exact", "sample"]),
    default="exact",
    show_default=True,
)
@click.option("--epsilon", type=float, default=0.05, show_default=True)
@click.option("--delta", type=float, default=0.01, show_default=True)
@click.option("--seed", type=int, default=None)
@_server_option
def coeff(a_list, z, modulus, method, estimate_mode, epsilon, delta, seed, server) -> None:
    """Count/estimate signed sums hitting z (the colinear FG coefficient)."""
    payload = {
        "a": _parse_int_list(a_list, "--a"),
        "z": z,
        "modulus": modulus,
        "method": method,
        "estimate_mode": estimate_mode,
        "epsilon": epsilon,
        "delta": delta,
        "seed": seed,
    }
    document = _dispatch("/coeff", payload, server)
    _emit(document)
    cross = document.get("cross_check")
    if cross is not None and not cross["ok"]:
        click.echo(
            f"cross-check failed: exact count {document['count_exact']} != "
            f"modular count {document['count_mod']} at aliasing-free level",
            err=True,
        )
        sys.exit(EXIT_CROSS_CHECK)


@main.command()
@click.option("--matrix", required=True, help="Row-major 'a,b,c,d' with det 1.")
@_server_option
def decompose(matrix, server) -> None:
    """Write the matrix as a word in S, T, Tinv and verify the round trip."""
    payload = {"matrix": _parse_matrix(matrix, "--matrix")}
    document = _dispatch("/decompose", payload, server)
    _emit(document)


@main.command()
@click.option("--check", "names", multiple=True, help="Run only the named checks.")
@click.option(
    "--threads",
    type=int,
    default=None,
    help="Worker threads (default: TORUSWRT_THREADS or 1).",
)
@_server_option
def verify(names, threads, server) -> None:
    """Run the mathematical invariant suite; exit 1 on any failure."""
    payload = {"names": list(names) or None, "threads": threads}
    document = _dispatch("/verify", payload, server)
    width = max((len(c["name"]) for c in document["checks"]), default=4)
    for check in document["checks"]:
        mark = "PASS" if check["passed"] else "FAIL"
        click.echo(f"{mark}  {check['name']:<{width}}  {check['detail']}", err=True)
    click.echo(
        f"{document['passed_count']}/{document['total']} checks passed", err=True
    )
    _emit(document)
    if not document["all_passed"]:
        sys.exit(EXIT_VERIFY_FAILURE)


@main.command()
@click.option("--repeats", type=int, default=3, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--no-sim", is_flag=True, help="Skip the simulator timing rows.")
@_server_option
def bench(repeats, seed, no_sim, server) -> None:
    """Benchmark the DP kernels (and simulator) and fit scaling exponents."""
    payload = {"include_sim": not no_sim, "repeats": repeats, "seed": seed}
    document = _dispatch("/bench", payload, server)
    click.echo(document["csv"], nl=False)


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
def serve(host, port) -> None:
    """Run the HTTP service."""
    import uvicorn

    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()
