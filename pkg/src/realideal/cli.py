"""Command-line front end: a thin client of the HTTP service.

By default the CLI talks to the FastAPI app in-process (no server needed,
same code path, byte-identical output); --server points it at a remote
instance instead.  File outputs (--sdpa) are written client-side from the
response payloads.

Exit codes: 0 definite verdict, 2 inconclusive, 1 error.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

import httpx


def _client(server: str | None) -> httpx.Client:
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from starlette.testclient import TestClient

    from .service.app import app

    return TestClient(app, base_url="http://realideal.local")


def _read_problem(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text()


def _post(client: httpx.Client, endpoint: str, payload: dict) -> dict:
    resp = client.post(endpoint, json=payload)
    if resp.status_code == 422:
        detail = resp.json().get("detail", resp.text)
        print(f"error: {detail}", file=sys.stderr)
        raise SystemExit(1)
    resp.raise_for_status()
    return resp.json()


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(
        prog="realideal",
        description=(
            "Decide whether the vanishing ideal of a semialgebraic feasible set "
            "matches a given ideal, repair the ideal when it does not, and build "
            "SDP relaxations with a no-duality-gap certificate."
        ),
    )
    parser.add_argument("--server", help="base URL of a running service (default: in-process)")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, orders=False):
        p.add_argument("problem", help="problem file path ('-' for stdin)")
        if orders:
            p.add_argument("--max-order", type=int, default=None, help="highest relaxation order")
            p.add_argument("--tol", type=float, default=1e-8, help="solver tolerance")
            p.add_argument("--sdpa", metavar="DIR", default=None, help="write SDPA files to DIR")

    add_common(sub.add_parser("parse", help="parse and echo the problem file"))
    add_common(sub.add_parser("check-real", help="decide whether the ideal is real"))
    p = sub.add_parser("check-ik", help="decide whether I(K) = I")
    add_common(p)
    p.add_argument("--dump-cad", action="store_true", help="append the CAD cell report")
    add_common(sub.add_parser("augment", help="repair the ideal until I(K) = I"))
    add_common(sub.add_parser("relax", help="build SDP relaxations"), orders=True)
    add_common(sub.add_parser("solve", help="solve the relaxation pair per order"), orders=True)
    add_common(sub.add_parser("report", help="full pipeline: equality check plus gap table"), orders=True)
    serve = sub.add_parser("serve", help="run the HTTP service")
    serve.add_argument("--host", default="127.0.0.1")
    serve.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return 0

    text = _read_problem(args.problem)
    with _client(args.server) as client:
        if args.command == "parse":
            data = _post(client, "/parse", {"text": text})
            print(data["report"], end="")
            return 0
        if args.command == "check-real":
            data = _post(client, "/check-real", {"text": text})
            print(data["report"], end="")
            return data["exit_code"]
        if args.command == "check-ik":
            data = _post(client, "/check-ik", {"text": text, "dump_cad": args.dump_cad})
            print(data["report"], end="")
            return data["exit_code"]
        if args.command == "augment":
            data = _post(client, "/augment", {"text": text})
            print(data["report"], end="")
            return data["exit_code"]
        if args.command == "relax":
            data = _post(client, "/relax", {"text": text, "max_order": args.max_order})
            print(data["report"], end="")
            if args.sdpa:
                outdir = Path(args.sdpa)
                outdir.mkdir(parents=True, exist_ok=True)
                for name, content in data["sdpa_files"].items():
                    (outdir / name).write_text(content)
                    print(f"wrote {outdir / name}")
            return 0
        if args.command == "solve":
            data = _post(
                client, "/solve", {"text": text, "max_order": args.max_order, "tol": args.tol}
            )
            print(data["report"], end="")
            return 0
        if args.command == "report":
            data = _post(
                client, "/report", {"text": text, "max_order": args.max_order, "tol": args.tol}
            )
            print(data["report"], end="")
            if args.sdpa:
                relax_data = _post(client, "/relax", {"text": text, "max_order": args.max_order})
                outdir = Path(args.sdpa)
                outdir.mkdir(parents=True, exist_ok=True)
                for name, content in relax_data["sdpa_files"].items():
                    (outdir / name).write_text(content)
                    print(f"wrote {outdir / name}")
            return data["exit_code"]
    raise SystemExit(f"unknown command {args.command}")


if __name__ == "__main__":
    sys.exit(main())
