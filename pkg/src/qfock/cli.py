"""Thin command-line client for the qfock service.

By default the CLI talks to an in-process instance of the FastAPI app (no
server required); pass --url to target a running server instead.  Exit
codes: 0 ok, 1 invariant/bound violation, 2 usage or domain error.
"""

from __future__ import annotations

import json
import sys

import click

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_USAGE = 2


def _client(url: str | None):
    if url:
        import httpx

        return httpx.Client(base_url=url, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        # starlette's testclient import warns about its httpx dependency
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _post(ctx, path: str, payload: dict) -> dict:
    with _client(ctx.obj.get("url")) as client:
        resp = client.post(path, json=payload)
    if resp.status_code != 200:
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        click.echo(f"error: {detail}", err=True)
        sys.exit(EXIT_USAGE)
    return resp.json()


def _parse_window(text: str) -> tuple[int, int]:
    try:
        lo, _, hi = text.partition(":")
        return int(lo), int(hi)
    except ValueError:
        click.echo(f"error: window must be LO:HI, got {text!r}", err=True)
        sys.exit(EXIT_USAGE)


def _write_out(text: str, out: str | None):
    if out:
        with open(out, "w", newline="") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


@click.group()
@click.option("--url", default=None, help="Base URL of a running qfock service; in-process if omitted.")
@click.pass_context
def main(ctx, url):
    """q-deformed Fock space toolkit."""
    ctx.ensure_object(dict)
    ctx.obj["url"] = url


@main.command()
@click.option("--corrupt-gram", is_flag=True, hidden=True, help="Test hook: inject a corrupted Gram entry.")
@click.pass_context
def verify(ctx, corrupt_gram):
    """Run all invariant suites; exit 1 on any failure."""
    data = _post(ctx, "/verify", {"corrupt_gram": corrupt_gram})
    for suite in data["suites"]:
        status = "pass" if suite["ok"] else "FAIL"
        line = f"[{status}] {suite['name']}: {suite['checks']} checks, {suite['failures']} failures"
        if suite["detail"]:
            line += f" ({suite['detail']})"
        click.echo(line)
    sys.exit(EXIT_OK if data["ok"] else EXIT_VIOLATION)


@main.command()
@click.argument("expr")
@click.option("--q", default=0.0, show_default=True)
@click.pass_context
def expect(ctx, expr, q):
    """Symbolic vacuum expectation of EXPR, plus its numeric value at q."""
    data = _post(ctx, "/expect", {"expr": expr, "q": q})
    click.echo(data["poly"])
    click.echo(f"{data['value']:.12g}")


@main.command()
@click.argument("expr")
@click.option("--q", default=0.0, show_default=True)
@click.option("--window", default="0:2", show_default=True, help="Mode window LO:HI.")
@click.option("--max-level", default=3, show_default=True)
@click.pass_context
def norm(ctx, expr, q, window, max_level):
    """Operator norm of EXPR on the truncated space."""
    data = _post(
        ctx,
        "/norm",
        {"expr": expr, "q": q, "window": _parse_window(window), "max_level": max_level},
    )
    click.echo(
        f"norm={data['value']:.12g} method={data['method']} "
        f"residual={data['residual']:.3g} levels={data['levels_used']}"
    )


@main.command()
@click.argument("expr")
@click.option("--q", default=0.0, show_default=True)
@click.option("--nmax", default=16, show_default=True)
@click.option("--seq", "seq_kind", type=click.Choice(["arith", "random"]), default="arith", show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--max-level", default=None, type=int)
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default=None, help="Output path; stdout if omitted.")
@click.pass_context
def mixing(ctx, expr, q, nmax, seq_kind, seed, max_level, fmt, out):
    """Cesaro-average decay sweep for a monomial EXPR; exit 1 on bound violation."""
    data = _post(
        ctx,
        "/mixing",
        {
            "expr": expr,
            "q": q,
            "nmax": nmax,
            "seq_kind": seq_kind,
            "seed": seed,
            "max_level": max_level,
        },
    )
    if fmt == "csv":
        _write_out(data["csv"], out)
    else:
        _write_out(json.dumps(data["rows"], indent=2) + "\n", out)
    sys.exit(EXIT_OK if data["ok"] else EXIT_VIOLATION)


@main.command()
@click.option("--window", default="0:1", show_default=True, help="Mode window LO:HI.")
@click.option("--max-level", default=2, show_default=True)
@click.option("--out", default=None, help="Output path; stdout if omitted.")
@click.pass_context
def gram(ctx, window, max_level, out):
    """Dump exact Gram blocks as JSON poly-strings."""
    data = _post(ctx, "/gram", {"window": _parse_window(window), "max_level": max_level})
    _write_out(json.dumps(data["blocks"], indent=2) + "\n", out)


if __name__ == "__main__":
    main()
