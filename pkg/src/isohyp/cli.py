"""Command-line front end.

The CLI is a thin client of the HTTP service: every subcommand builds a
request, sends it through the service (in process by default, or to a
remote server given with --server), and writes the response out as CSV
and JSON artifacts.

Exit codes: 0 success, 1 unknown subcommand, 2 validation failure,
3 numerical failure.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import warnings
from typing import Optional

SUBCOMMANDS = ("profile", "shoot", "verify", "minimize", "hopf")


def _default_jobs() -> int:
    env = os.environ.get("ISOHYP_JOBS")
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            pass
    return os.cpu_count() or 1


class _Client:
    """POSTs to a remote server or to the in-process app."""

    def __init__(self, server: Optional[str]):
        self.server = server.rstrip("/") if server else None
        if self.server is None:
            with warnings.catch_warnings():
                warnings.simplefilter("ignore")
                from fastapi.testclient import TestClient

                from .service import app
                self._client = TestClient(app)
        else:
            import httpx

            self._client = httpx.Client(base_url=self.server, timeout=600.0)

    def post(self, path: str, payload: dict):
        resp = self._client.post(path, json=payload)
        if resp.status_code == 200:
            return resp.json()
        try:
            detail = resp.json().get("detail", resp.text)
        except Exception:
            detail = resp.text
        if resp.status_code == 422:
            print(f"validation failure: {detail}", file=sys.stderr)
            raise SystemExit(2)
        print(f"numerical failure ({resp.status_code}): {detail}",
              file=sys.stderr)
        raise SystemExit(3)


def _write_csv(path: str, columns, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(columns)
        for row in rows:
            if isinstance(row, dict):
                row = [row[c] for c in columns]
            writer.writerow([repr(x) if isinstance(x, float) else x
                             for x in row])


def _write_json(path: str, payload) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _apply_config_file(args: argparse.Namespace) -> None:
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            overrides = json.load(fh)
        for key, value in overrides.items():
            setattr(args, key.replace("-", "_"), value)


def _parse_grid(text: str):
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be start:stop:count")
    return float(parts[0]), float(parts[1]), int(parts[2])


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isohyp",
        description="Numerical laboratory for weighted isoperimetry in "
                    "hyperbolic space")
    sub = parser.add_subparsers(dest="subcommand")

    def common(p):
        p.add_argument("--server", default=None,
                       help="URL of a running service; default runs in process")
        p.add_argument("--config", default=None,
                       help="JSON file whose keys override the flags")
        p.add_argument("--jobs", type=int, default=_default_jobs(),
                       help="parallel workers (env ISOHYP_JOBS)")

    p = sub.add_parser("profile", help="ball-family isoperimetric profile")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--density", default="cosh:1")
    p.add_argument("--v-grid", type=_parse_grid, default=(0.1, 10.0, 25),
                   help="volume grid start:stop:count")
    p.add_argument("--out", default="profile.csv")
    common(p)

    p = sub.add_parser("shoot", help="integrate one generating curve")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--density", default="cosh:1")
    p.add_argument("--tau-star", type=float, required=True)
    p.add_argument("--lambda-rel", type=float, default=1.0)
    p.add_argument("--lambda-abs", type=float, default=None)
    p.add_argument("--step-tol", type=float, default=1e-10)
    p.add_argument("--max-arclength", type=float, default=50.0)
    p.add_argument("--out-prefix", default="shoot")
    common(p)

    p = sub.add_parser("verify", help="run the lemma verification suites")
    p.add_argument("--suite", default="all",
                   choices=("all", "h1_circle", "formula_k", "center_c",
                            "comparison"))
    p.add_argument("--seed", type=int, default=7)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--out", default="verify.json")
    common(p)

    p = sub.add_parser("minimize", help="volume-constrained optimization")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--density", default="cosh:1")
    p.add_argument("--target-volume", type=float, default=None)
    p.add_argument("--target-ball-tau", type=float, default=None)
    p.add_argument("--modes", type=int, default=16)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--amplitude", type=float, default=0.1)
    p.add_argument("--max-iters", type=int, default=400)
    p.add_argument("--grad-tol", type=float, default=1e-6)
    p.add_argument("--out-prefix", default="minimize")
    common(p)

    p = sub.add_parser("hopf", help="rank-one symmetric space crosscheck")
    p.add_argument("--spaces", default="C:2,C:3,H:2,O:2",
                   help="comma list of field:m pairs")
    p.add_argument("--taus", default="0.5,1,2",
                   help="comma list of radii")
    p.add_argument("--out", default="hopf.csv")
    common(p)

    return parser


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    if argv and not argv[0].startswith("-") and argv[0] not in SUBCOMMANDS:
        print(f"unknown subcommand {argv[0]!r}", file=sys.stderr)
        _build_parser().print_usage(sys.stderr)
        return 1
    parser = _build_parser()
    args = parser.parse_args(argv)
    if args.subcommand is None:
        parser.print_usage(sys.stderr)
        return 1
    _apply_config_file(args)
    client = _Client(args.server)

    if args.subcommand == "profile":
        v0, v1, count = args.v_grid
        out = client.post("/profile", {
            "n": args.n, "density": args.density,
            "v_start": v0, "v_stop": v1, "v_count": count})
        _write_csv(args.out, out["columns"], out["rows"])
        print(f"profile: {len(out['rows'])} rows -> {args.out}")
        return 0

    if args.subcommand == "shoot":
        out = client.post("/shoot", {
            "n": args.n, "density": args.density, "tau_star": args.tau_star,
            "lambda_rel": args.lambda_rel, "lambda_abs": args.lambda_abs,
            "step_tol": args.step_tol, "max_arclength": args.max_arclength})
        csv_path = f"{args.out_prefix}_trajectory.csv"
        json_path = f"{args.out_prefix}_events.json"
        _write_csv(csv_path, out["columns"], out["states"])
        _write_json(json_path, {"events": out["events"],
                                "closure": out["closure"],
                                "classification": out["classification"],
                                "termination": out["termination"],
                                "hf_drift": out["hf_drift"]})
        print(f"shoot: classification {out['classification']} "
              f"(termination {out['termination']}, "
              f"hf drift {out['hf_drift']:.3e}) -> {csv_path}, {json_path}")
        return 0

    if args.subcommand == "verify":
        out = client.post("/verify", {
            "suite": args.suite, "seed": args.seed, "count": args.count,
            "jobs": args.jobs})
        _write_json(args.out, out)
        for name in ("h1_circle", "formula_k", "center_c", "comparison"):
            if name in out:
                rec = out[name]
                print(f"verify {name}: {rec['passes']}/{rec['count']} "
                      f"worst margin {rec['worst_margin']:.3e}")
        print(f"verify report -> {args.out}")
        return 0

    if args.subcommand == "minimize":
        out = client.post("/minimize", {
            "n": args.n, "density": args.density,
            "target_volume": args.target_volume,
            "target_ball_tau": args.target_ball_tau,
            "modes": args.modes, "seed": args.seed,
            "amplitude": args.amplitude, "max_iters": args.max_iters,
            "grad_tol": args.grad_tol})
        json_path = f"{args.out_prefix}_report.json"
        csv_path = f"{args.out_prefix}_history.csv"
        _write_json(json_path, out)
        _write_csv(csv_path, out["history_columns"],
                   list(enumerate(out["Pf_history"])))
        print(f"minimize: converged={out['converged']} "
              f"deficit={out['deficit']:.3e} "
              f"nonround={out['nonround_energy']:.3e} "
              f"-> {json_path}, {csv_path}")
        return 0

    if args.subcommand == "hopf":
        spaces = [s for s in args.spaces.split(",") if s]
        taus = [float(x) for x in args.taus.split(",") if x]
        out = client.post("/hopf", {"spaces": spaces, "taus": taus})
        _write_csv(args.out, out["columns"], out["rows"])
        worst = max(max(r["relerr_P"], r["relerr_V"]) for r in out["rows"])
        print(f"hopf: {len(out['rows'])} rows, worst rel err {worst:.3e} "
              f"-> {args.out}")
        return 0

    return 1  # pragma: no cover


if __name__ == "__main__":
    sys.exit(main())
