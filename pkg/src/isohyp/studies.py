"""Orchestration of the laboratory studies.

Each study takes plain configuration values and returns JSON-ready
dictionaries; the FastAPI service and the CLI are thin wrappers around
these functions.  Every run is reproducible from its configuration and
seed: randomized suites shard deterministically (fixed shard plan and
per-shard seeds independent of the worker count) and all reductions are
ordered.
"""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from typing import List, Optional, Sequence

import numpy as np

from . import lemma_checks
from .density import parse_density
from .functionals import PolarProfile, ball_quantities, ball_radius_for_volume
from .hopf import SpaceParams, ball_direct, crosscheck, hopf_density
from .optimize import MinimizeConfig, minimize
from .shooting import ShootingConfig, classify, lambda_for_ball, shoot

TRAJECTORY_COLUMNS = ["u", "s", "t", "alpha", "rho", "kappa_gamma",
                      "kappa_C", "H1", "Hf"]
PROFILE_COLUMNS = ["v", "tau", "Pf"]
HOPF_COLUMNS = ["field", "m", "n", "d", "tau", "P_direct", "V_direct",
                "P_weighted", "V_weighted", "relerr_P", "relerr_V"]
MINIMIZE_HISTORY_COLUMNS = ["iteration", "Pf"]

_VERIFY_SHARD = 50


def profile_study(n: int, density, v_start: float, v_stop: float,
                  v_count: int) -> dict:
    """Isoperimetric profile of the ball family: (v, tau(v), Pf(v)) rows."""
    d = parse_density(density)
    if v_start <= 0.0 or v_stop <= v_start or v_count < 2:
        raise ValueError("need 0 < v_start < v_stop and v_count >= 2")
    rows = []
    for v in np.linspace(v_start, v_stop, v_count):
        tau = ball_radius_for_volume(n, d, float(v))
        b = ball_quantities(n, d, tau)
        rows.append({"v": float(v), "tau": tau, "Pf": b.Pf})
    return {"columns": PROFILE_COLUMNS, "rows": rows,
            "n": n, "density": d.label()}


def shoot_study(n: int, density, tau_star: float, lambda_rel: float = 1.0,
                lambda_abs: Optional[float] = None, step_tol: float = 1e-10,
                max_arclength: float = 50.0,
                classify_tol: float = 1e-6) -> dict:
    """Integrate one generating curve and classify the outcome."""
    d = parse_density(density)
    lam = lambda_abs if lambda_abs is not None \
        else lambda_rel * lambda_for_ball(n, d, tau_star)
    cfg = ShootingConfig(n=n, density=d, lam=lam, start_t=tau_star,
                         step_tol=step_tol, max_arclength=max_arclength)
    traj = shoot(cfg)
    cl = classify(traj, classify_tol)
    states = []
    for st in traj.states:
        b = traj.breakdown_at(st.u)
        rho = math.asinh(math.hypot(math.sinh(st.fermi.s) * math.cosh(st.fermi.t),
                                    math.sinh(st.fermi.t)))
        states.append([st.u, st.fermi.s, st.fermi.t, st.alpha, rho,
                       b.kappa_gamma, b.kappa_c, b.h1, b.hf])
    events = [{"kind": e.kind.value, "u": e.u, "s": e.state.fermi.s,
               "t": e.state.fermi.t, "alpha": e.state.alpha}
              for e in traj.events]
    return {
        "n": n, "density": d.label(), "tau_star": tau_star, "lambda": lam,
        "classification": cl.kind.value,
        "termination": traj.termination,
        "closure": {
            "closed": traj.closure.closed,
            "closing_angle_defect": traj.closure.closing_angle_defect,
            "curl_detected": traj.closure.curl_detected,
            "axis_return": traj.closure.axis_return,
            "t_end": traj.closure.t_end,
        },
        "rho_deviation": cl.rho_deviation,
        "monotonicity_violation_u": cl.monotonicity_violation_u,
        "hf_drift": traj.hf_drift(),
        "events": events,
        "columns": TRAJECTORY_COLUMNS,
        "states": states,
    }


_SUITE_RUNNERS = {
    "h1_circle": lemma_checks.run_h1_suite,
    "formula_k": lemma_checks.run_formula_k_suite,
    "center_c": lemma_checks.run_center_c_suite,
    "comparison": lemma_checks.run_comparison_suite,
}


def _run_verify_shard(args) -> dict:
    name, count, seed = args
    return _SUITE_RUNNERS[name](count, seed).as_record()


def _merge_shards(records: List[dict]) -> dict:
    out = dict(records[0])
    out["failures"] = list(records[0]["failures"])
    for r in records[1:]:
        out["count"] += r["count"]
        out["passes"] += r["passes"]
        out["worst_margin"] = min(out["worst_margin"], r["worst_margin"])
        out["failures"] += r["failures"]
    return out


def verify_study(suite: str = "all", seed: int = 7, count: int = 200,
                 jobs: int = 1) -> dict:
    """Run the lemma suites with a deterministic shard plan.

    The shard layout and per-shard seeds depend only on (suite, seed,
    count), never on the worker count, so outputs are identical for any
    ``jobs``.
    """
    names = list(_SUITE_RUNNERS) if suite == "all" else [suite]
    for name in names:
        if name not in _SUITE_RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
    plan = []
    seeds = np.random.SeedSequence(seed).spawn(len(_SUITE_RUNNERS) + 1)
    suite_seed = {name: seeds[i] for i, name in enumerate(_SUITE_RUNNERS)}
    for name in names:
        shard_seeds = suite_seed[name].spawn(max(1, math.ceil(count / _VERIFY_SHARD)))
        remaining = count
        for ss in shard_seeds:
            take = min(_VERIFY_SHARD, remaining)
            plan.append((name, take, int(ss.generate_state(1)[0])))
            remaining -= take
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(_run_verify_shard, plan))
    else:
        records = [_run_verify_shard(p) for p in plan]
    report: dict = {"seed": seed, "count": count, "suite": suite}
    for name in names:
        shards = [r for p, r in zip(plan, records) if p[0] == name]
        report[name] = _merge_shards(shards)
    if suite in ("all", "comparison"):
        ident_seed = int(seeds[-1].generate_state(1)[0])
        report["kappa_c_identity_500"] = lemma_checks.kappa_c_identity_draws(
            500, ident_seed)
    return report


def minimize_study(n: int, density, target_volume: Optional[float] = None,
                   target_ball_tau: Optional[float] = None, modes: int = 16,
                   seed: int = 0, amplitude: float = 0.1,
                   max_iters: int = 400, grad_tol: float = 1e-6,
                   init_coeffs: Optional[Sequence[float]] = None) -> dict:
    """One optimizer run; the target volume may be given directly or as
    the volume of the ball of radius target_ball_tau."""
    d = parse_density(density)
    if target_volume is None:
        if target_ball_tau is None:
            raise ValueError("need target_volume or target_ball_tau")
        target_volume = ball_quantities(n, d, target_ball_tau).Vf
    init = None
    if init_coeffs is not None:
        init = PolarProfile(tuple(init_coeffs), n)
    cfg = MinimizeConfig(n=n, density=d, target_volume=target_volume,
                         modes=modes, init=init, max_iters=max_iters,
                         grad_tol=grad_tol, seed=seed,
                         init_amplitude=amplitude)
    rep = minimize(cfg)
    out = rep.as_record()
    out.update({"n": n, "density": d.label(), "target_volume": target_volume,
                "seed": seed, "history_columns": MINIMIZE_HISTORY_COLUMNS})
    return out


def hopf_study(spaces: Sequence, taus: Sequence[float]) -> dict:
    """Crosscheck table over (space, tau) pairs.

    ``spaces`` entries are (field, m) pairs or "C:2"-style strings.
    """
    rows = []
    for entry in spaces:
        if isinstance(entry, str):
            fld, _, m = entry.partition(":")
            sp = SpaceParams(fld, int(m))
        else:
            sp = SpaceParams(str(entry[0]), int(entry[1]))
        dens = hopf_density(sp)
        for tau in taus:
            p_direct, v_direct = ball_direct(sp, float(tau))
            b = ball_quantities(sp.n, dens, float(tau))
            rel_p, rel_v = crosscheck(sp, float(tau))
            rows.append({"field": sp.field, "m": sp.m, "n": sp.n, "d": sp.d,
                         "tau": float(tau), "P_direct": p_direct,
                         "V_direct": v_direct, "P_weighted": b.Pf,
                         "V_weighted": b.Vf, "relerr_P": rel_p,
                         "relerr_V": rel_v})
    return {"columns": HOPF_COLUMNS, "rows": rows}
