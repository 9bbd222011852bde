"""Thin command-line client for the scenario service.

Every subcommand builds a request model, sends it to the service (by
default in-process over an ASGI transport, or to a remote instance via
--url), writes the JSON report atomically, and maps the outcome to exit
codes: 0 all invariants held, 1 a violation was found (witness in the
report), 2 malformed input.

Vector arguments accept basis expressions ("e1", "e1+e2+e3", "2e1-e3",
"1/2e2") or bracketed rational lists ("[1,0,1/2]"), comma-separated.
"""

from __future__ import annotations

import argparse
import asyncio
import json
import os
import re
import sys
import tempfile
from fractions import Fraction

import httpx

EXIT_OK = 0
EXIT_VIOLATION = 1
EXIT_INPUT = 2

_TERM = re.compile(r"([+-]?)(\d+(?:/\d+)?)?e(\d+)")

NORM_ALIASES = {
    "cube": ("linf", 3),
    "octahedron": ("l1", 3),
    "square": ("linf", 2),
    "diamond": ("l1", 2),
}


class CliInputError(Exception):
    pass


def split_vectors(text: str) -> list:
    """Split on top-level commas; brackets protect their interiors."""
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch == "[":
            depth += 1
        elif ch == "]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if current:
        parts.append("".join(current))
    return [p.strip() for p in parts if p.strip()]


def parse_vector(token: str, dim: int) -> list:
    """One vector as a list of rational strings of length dim."""
    token = token.strip()
    if token.startswith("["):
        if not token.endswith("]"):
            raise CliInputError(f"unbalanced brackets in {token!r}")
        entries = [s.strip() for s in token[1:-1].split(",")]
        if len(entries) != dim:
            raise CliInputError(
                f"vector {token!r} has {len(entries)} entries, expected {dim}"
            )
        for s in entries:
            Fraction(s)  # validate
        return entries
    coeffs = [Fraction(0)] * dim
    pos = 0
    compact = token.replace(" ", "")
    for m in _TERM.finditer(compact):
        if m.start() != pos:
            raise CliInputError(f"cannot parse vector expression {token!r}")
        pos = m.end()
        sign, coeff, idx = m.groups()
        i = int(idx) - 1
        if not 0 <= i < dim:
            raise CliInputError(f"basis index e{idx} out of range for dim {dim}")
        c = Fraction(coeff) if coeff else Fraction(1)
        if sign == "-":
            c = -c
        coeffs[i] += c
    if pos != len(compact) or pos == 0:
        raise CliInputError(f"cannot parse vector expression {token!r}")
    return [str(c) for c in coeffs]


def parse_vectors(text: str, dim: int, count: int = None) -> list:
    vecs = [parse_vector(t, dim) for t in split_vectors(text)]
    if count is not None and len(vecs) != count:
        raise CliInputError(f"expected {count} vectors in {text!r}, got {len(vecs)}")
    return vecs


def norm_spec_from_args(args) -> dict:
    name = args.norm
    dim = args.dim
    if name in NORM_ALIASES:
        name, dim = NORM_ALIASES[name]
    if name in ("linf", "l1", "random"):
        if dim is None:
            raise CliInputError("builtin norms need --dim")
        spec = {"builtin": name, "dim": dim}
        if name == "random":
            spec["seed"] = args.norm_seed
            spec["facet_pairs"] = args.facet_pairs
        return spec
    # otherwise a polytope JSON file
    if not os.path.exists(name):
        raise CliInputError(f"norm {name!r} is neither builtin nor a readable file")
    with open(name) as fh:
        data = json.load(fh)
    spec = {"facets": data["facets"], "dim": data.get("dim")}
    if "vertices" in data:
        spec["vertices"] = data["vertices"]
    return spec


def _dim_of(spec: dict) -> int:
    if spec.get("dim"):
        return spec["dim"]
    return len(spec["facets"][0])


def post_scenario(path: str, payload: dict, url: str = None) -> httpx.Response:
    if url:
        transport = None
        base_url = url.rstrip("/")
    else:
        from .service.app import app

        transport = httpx.ASGITransport(app=app)
        base_url = "http://normcalib.local"

    async def go():
        async with httpx.AsyncClient(
            transport=transport, base_url=base_url, timeout=None
        ) as client:
            return await client.post(path, json=payload)

    return asyncio.run(go())


def write_report(report: dict, out_path: str) -> None:
    """Canonical, atomic JSON write: sorted keys, fixed separators."""
    text = json.dumps(report, indent=2, sort_keys=True) + "\n"
    if out_path == "-":
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out_path))
    fd, tmp = tempfile.mkstemp(dir=directory, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, out_path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_csv(rows: list, header: list, path: str) -> None:
    import csv

    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(header)
        writer.writerows(rows)


def _finish(args, resp: httpx.Response, stdout_line: str = None) -> int:
    if resp.status_code in (400, 422):
        detail = resp.json().get("detail", resp.text)
        print(f"input error: {detail}", file=sys.stderr)
        return EXIT_INPUT
    resp.raise_for_status()
    data = resp.json()
    report = data["report"]
    if getattr(args, "csv", None):
        _dump_csv(args, report)
    if args.out:
        write_report(report, args.out)
    if stdout_line is not None:
        print(stdout_line.format(report=report))
    else:
        print(f"{data['command']}: {data['status']}")
    return data["exit_code"]


def _dump_csv(args, report: dict) -> None:
    if report["command"] == "calibrate" and "samples" in report:
        rows = [
            [s["sigma"][0], s["sigma"][1], s["omega"], s["density"], s["violation"]]
            for s in report["samples"]
        ]
        write_csv(rows, ["v1", "v2", "omega", "density", "violation"], args.csv)
    elif report["command"] == "semi-elliptic":
        rows = [
            [
                t["generator"],
                t["bh_competitor"]["value"],
                t["bh_disc"]["value"],
                t["alpha_competitor"]["value"],
                t["gap"]["value"],
            ]
            for t in report["experiment"]["trials"]
        ]
        write_csv(
            rows,
            ["generator", "bh_competitor", "bh_disc", "alpha_competitor", "gap"],
            args.csv,
        )


def _add_common(p: argparse.ArgumentParser, norm: bool = True) -> None:
    if norm:
        p.add_argument("--norm", default="linf", help="linf|l1|random|cube|octahedron|square|diamond|polytope.json")
        p.add_argument("--dim", type=int, default=None)
        p.add_argument("--norm-seed", type=int, default=0, help="seed for random norms")
        p.add_argument("--facet-pairs", type=int, default=8, help="facet pairs for random norms")
    p.add_argument("--mode", choices=("exact", "float"), default="exact")
    p.add_argument("--out", default=None, help="report file path ('-' for stdout)")
    p.add_argument("--url", default=None, help="remote service URL (default: in-process)")
    p.add_argument("--config", default=None, help="JSON file with the full request body")


def _payload(args, build) -> dict:
    if args.config:
        with open(args.config) as fh:
            return json.load(fh)
    return build(args)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="normcalib",
        description="area densities, calibrating forms and minimality checks for polyhedral norms",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("section", help="plane section with supports and weights")
    _add_common(p)
    p.add_argument("--plane", required=False, default="e1,e2")

    p = sub.add_parser("density", help="evaluate densities on a simple 2-vector")
    _add_common(p)
    p.add_argument("--sigma", required=True)
    p.add_argument("--plane", default=None, help="enables the weighted density")
    p.add_argument("--which", choices=("bh", "ht", "alpha"), default="bh")

    p = sub.add_parser("calibrate", help="build a calibrator and verify by sampling")
    _add_common(p)
    p.add_argument("--plane", default="e1,e2")
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coord-bound", type=int, default=10)
    p.add_argument("--csv", default=None, help="per-sample CSV dump")

    p = sub.add_parser("prop-check", help="exact identity and inequality fuzz")
    _add_common(p, norm=False)
    p.add_argument("--random-polygons", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--max-half-edges", type=int, default=8)
    p.add_argument("--functionals", type=int, default=4)

    p = sub.add_parser("semi-elliptic", help="competitor-vs-disc area experiments")
    _add_common(p)
    p.add_argument("--plane", default=None, help="default: seeded random plane")
    p.add_argument("--disc", default=None, help="boundary points, e.g. '[1,0],[0,1],[-1,0],[0,-1]'")
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ring", choices=("Z", "Z2"), default="Z")
    p.add_argument("--csv", default=None, help="per-trial CSV dump")

    p = sub.add_parser("lp-search", help="LP feasibility search for a calibrator")
    _add_common(p)
    p.add_argument("--plane", default="e1,e2")
    p.add_argument("--density", choices=("bh", "ht"), default="bh")
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--coord-bound", type=int, default=10)

    p = sub.add_parser("kdim-search", help="coefficient search for the k-dim criterion")
    _add_common(p)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--extra-pairs", type=int, default=2)
    p.add_argument("--revalidate", type=int, default=0)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)

    args = parser.parse_args(argv)

    if args.command == "serve":
        import uvicorn

        from .service.app import app

        uvicorn.run(app, host=args.host, port=args.port)
        return EXIT_OK

    try:
        return _dispatch(args)
    except (CliInputError, FileNotFoundError, json.JSONDecodeError, KeyError) as exc:
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except httpx.HTTPError as exc:
        print(f"service error: {exc}", file=sys.stderr)
        return EXIT_INPUT


def _dispatch(args) -> int:
    cmd = args.command
    if cmd == "section":
        spec = norm_spec_from_args(args)
        dim = _dim_of(spec)

        def build(a):
            return {
                "norm": spec,
                "plane": parse_vectors(a.plane, dim, 2),
                "mode": a.mode,
            }

        return _finish(args, post_scenario("/v1/section", _payload(args, build), args.url))

    if cmd == "density":
        spec = norm_spec_from_args(args)
        dim = _dim_of(spec)

        def build(a):
            payload = {
                "norm": spec,
                "sigma": parse_vectors(a.sigma, dim, 2),
                "which": a.which,
                "mode": a.mode,
            }
            if a.plane:
                payload["plane"] = parse_vectors(a.plane, dim, 2)
            return payload

        return _finish(
            args,
            post_scenario("/v1/density", _payload(args, build), args.url),
            stdout_line="{report[value_str]}",
        )

    if cmd == "calibrate":
        spec = norm_spec_from_args(args)
        dim = _dim_of(spec)

        def build(a):
            return {
                "norm": spec,
                "plane": parse_vectors(a.plane, dim, 2),
                "samples": a.samples,
                "seed": a.seed,
                "coord_bound": a.coord_bound,
                "collect_samples": bool(a.csv),
                "mode": a.mode,
            }

        return _finish(args, post_scenario("/v1/calibrate", _payload(args, build), args.url))

    if cmd == "prop-check":

        def build(a):
            return {
                "random_polygons": a.random_polygons,
                "seed": a.seed,
                "max_half_edges": a.max_half_edges,
                "functional_count": a.functionals,
                "mode": a.mode,
            }

        return _finish(args, post_scenario("/v1/prop-check", _payload(args, build), args.url))

    if cmd == "semi-elliptic":
        spec = norm_spec_from_args(args)
        dim = _dim_of(spec)

        def build(a):
            payload = {
                "norm": spec,
                "trials": a.trials,
                "seed": a.seed,
                "ring": a.ring,
                "mode": a.mode,
            }
            if a.plane:
                payload["plane"] = parse_vectors(a.plane, dim, 2)
            if a.disc:
                payload["disc"] = {"points": parse_vectors(a.disc, 2)}
            return payload

        return _finish(args, post_scenario("/v1/semi-elliptic", _payload(args, build), args.url))

    if cmd == "lp-search":
        spec = norm_spec_from_args(args)
        dim = _dim_of(spec)

        def build(a):
            return {
                "norm": spec,
                "plane": parse_vectors(a.plane, dim, 2),
                "density": a.density,
                "samples": a.samples,
                "seed": a.seed,
                "coord_bound": a.coord_bound,
                "mode": a.mode,
            }

        return _finish(args, post_scenario("/v1/lp-search", _payload(args, build), args.url))

    if cmd == "kdim-search":
        spec = norm_spec_from_args(args)

        def build(a):
            return {
                "body": spec,
                "samples": a.samples,
                "seed": a.seed,
                "extra_pairs": a.extra_pairs,
                "revalidation_samples": a.revalidate,
                "mode": a.mode,
            }

        return _finish(args, post_scenario("/v1/kdim-search", _payload(args, build), args.url))

    raise CliInputError(f"unknown command {cmd!r}")


if __name__ == "__main__":
    sys.exit(main())
