"""Command-line front end: a thin client of the metric service.

By default requests are dispatched to an in-process instance of the FastAPI
app, so no server is needed; ``--url`` points every subcommand at a running
instance instead.  Exit codes: 0 success, 2 unreadable/unparsable input
(with line/column), 3 validation or domain error (with field path), 4 exact
solver capacity exceeded.

The environment variable ``TRAJMETRIC_SEED`` overrides the seed of any
simulation config; with ``--runs N`` run ``i`` uses ``seed + i``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import httpx

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_VALIDATION = 3
EXIT_CAPACITY = 4

SEED_ENV_VAR = "TRAJMETRIC_SEED"


def _make_client(url: str | None) -> httpx.Client:
    if url:
        return httpx.Client(base_url=url, timeout=600.0)
    import warnings

    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        from fastapi.testclient import TestClient

    from .service import app

    return TestClient(app)


def _load_json(path: str):
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        print(f"error: cannot read {path}: {exc}", file=sys.stderr)
        raise SystemExit(EXIT_PARSE)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        print(
            f"parse error in {path} at line {exc.lineno} column {exc.colno}: {exc.msg}",
            file=sys.stderr,
        )
        raise SystemExit(EXIT_PARSE)


def _fail_validation(message: str) -> "SystemExit":
    print(f"validation error: {message}", file=sys.stderr)
    return SystemExit(EXIT_VALIDATION)


def _handle_http_error(resp: httpx.Response) -> "SystemExit":
    try:
        body = resp.json()
    except ValueError:
        body = {}
    if resp.status_code == 422:
        detail = body.get("detail", [])
        if isinstance(detail, list):
            for item in detail:
                loc = ".".join(str(part) for part in item.get("loc", []))
                print(f"validation error at {loc or '<request>'}: {item.get('msg', '')}", file=sys.stderr)
        else:
            print(f"validation error: {detail}", file=sys.stderr)
        return SystemExit(EXIT_VALIDATION)
    if resp.status_code == 409 and body.get("kind") == "capacity":
        print(f"error: {body.get('detail', 'solver capacity exceeded')}", file=sys.stderr)
        print("hint: retry with --solver lp", file=sys.stderr)
        return SystemExit(EXIT_CAPACITY)
    print(f"error: service returned {resp.status_code}: {resp.text}", file=sys.stderr)
    return SystemExit(1)


def _dump_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def _write_atomic(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(path.name + f".tmp.{os.getpid()}")
    tmp.write_bytes(text.encode("utf-8"))
    os.replace(tmp, path)


def _emit(text: str, out: str | None) -> None:
    if out:
        _write_atomic(Path(out), text)
    else:
        sys.stdout.write(text)


def _add_metric_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--metric", choices=["ptgospa", "tgospa", "gospa", "pgospa"], default="ptgospa")
    parser.add_argument("--solver", choices=["exact", "lp"], default="lp")
    parser.add_argument("--c", type=float, default=10.0, help="cut-off distance (default 10)")
    parser.add_argument("--p", type=float, default=2.0, help="metric order (default 2)")
    parser.add_argument("--gamma", type=float, default=2.0, help="switch cost (default 2)")
    parser.add_argument("--base", choices=["wasserstein2", "euclidean_means"], default="wasserstein2")


def _metric_body(args: argparse.Namespace) -> dict:
    return {
        "params": {"c": args.c, "p": args.p, "gamma": args.gamma},
        "metric": args.metric,
        "solver": args.solver,
        "base": args.base,
    }


def _cmd_compute(args: argparse.Namespace) -> int:
    truth = _load_json(args.truth)
    estimate = _load_json(args.estimate)
    body = {"truth": truth, "estimate": estimate, "emit_weights": args.emit_weights}
    body.update(_metric_body(args))
    with _make_client(args.url) as client:
        resp = client.post("/compute", json=body)
        if resp.status_code != 200:
            raise _handle_http_error(resp)
        _emit(_dump_json(resp.json()), args.out)
    return EXIT_OK


def _seed_base(config: dict) -> int:
    env = os.environ.get(SEED_ENV_VAR)
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _fail_validation(f"{SEED_ENV_VAR} must be an integer, got {env!r}")
    seed = config.get("seed", 0)
    if not isinstance(seed, int):
        raise _fail_validation("config seed must be an integer")
    return seed


def _cmd_simulate(args: argparse.Namespace) -> int:
    config = _load_json(args.config)
    if not isinstance(config, dict):
        raise _fail_validation("scenario config must be a JSON object")
    if args.runs is not None and args.runs < 1:
        raise _fail_validation("--runs must be >= 1")
    seed = _seed_base(config)
    out_dir = Path(args.out)

    with _make_client(args.url) as client:

        def one_run(run_index: int | None) -> None:
            run_config = dict(config)
            run_config["seed"] = seed if run_index is None else seed + run_index
            body = {"config": run_config, "compute_report": run_index is not None}
            body.update(_metric_body(args))
            resp = client.post("/simulate", json=body)
            if resp.status_code != 200:
                raise _handle_http_error(resp)
            payload = resp.json()
            base = out_dir if run_index is None else out_dir / f"run_{run_index:03d}"
            _write_atomic(base / "truth.json", _dump_json(payload["truth"]))
            _write_atomic(base / "estimate.json", _dump_json(payload["estimate"]))
            if payload.get("report") is not None:
                _write_atomic(base / "report.json", _dump_json(payload["report"]))

        if args.runs is None:
            one_run(None)
        else:
            with ThreadPoolExecutor(max_workers=max(1, args.jobs)) as pool:
                for future in [pool.submit(one_run, i) for i in range(args.runs)]:
                    future.result()
    return EXIT_OK


def _collect_reports(paths: list[str]) -> list[str]:
    files: list[str] = []
    for raw in paths:
        path = Path(raw)
        if path.is_dir():
            found = sorted(path.glob("run_*/report.json")) or sorted(path.glob("*.json"))
            files.extend(str(f) for f in found)
        else:
            files.append(raw)
    return files


def _cmd_curves(args: argparse.Namespace) -> int:
    files = _collect_reports(args.paths)
    if not files:
        raise _fail_validation("no report files found in the given paths")
    reports = [_load_json(f) for f in files]
    with _make_client(args.url) as client:
        resp = client.post("/curves", json={"reports": reports})
        if resp.status_code != 200:
            raise _handle_http_error(resp)
        _emit(resp.json()["csv"], args.out)
    return EXIT_OK


def _cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    uvicorn.run("trajmetric.service:app", host=args.host, port=args.port)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trajmetric", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="compute a metric between truth and estimate files")
    p_compute.add_argument("truth")
    p_compute.add_argument("estimate")
    _add_metric_flags(p_compute)
    p_compute.add_argument("--emit-weights", action="store_true", help="include optimal weights in the report")
    p_compute.add_argument("--out", help="write the report here instead of stdout")
    p_compute.add_argument("--url", help="use a running service instead of in-process dispatch")
    p_compute.set_defaults(func=_cmd_compute)

    p_sim = sub.add_parser("simulate", help="generate synthetic truth/estimate documents")
    p_sim.add_argument("config")
    p_sim.add_argument("--out", default=".", help="output directory (default: current)")
    p_sim.add_argument("--runs", type=int, default=None, help="Monte Carlo runs; writes per-run reports")
    p_sim.add_argument("--jobs", type=int, default=4, help="max concurrent runs (default 4)")
    _add_metric_flags(p_sim)
    p_sim.add_argument("--url", help="use a running service instead of in-process dispatch")
    p_sim.set_defaults(func=_cmd_simulate)

    p_curves = sub.add_parser("curves", help="aggregate reports into a plot-ready CSV")
    p_curves.add_argument("paths", nargs="+", help="report files or a simulate output directory")
    p_curves.add_argument("--out", help="write the CSV here instead of stdout")
    p_curves.add_argument("--url", help="use a running service instead of in-process dispatch")
    p_curves.set_defaults(func=_cmd_curves)

    p_serve = sub.add_parser("serve", help="run the HTTP service")
    p_serve.add_argument("--host", default="127.0.0.1")
    p_serve.add_argument("--port", type=int, default=8000)
    p_serve.set_defaults(func=_cmd_serve)
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except SystemExit:
        raise
    except httpx.HTTPError as exc:
        print(f"error: cannot reach service: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
