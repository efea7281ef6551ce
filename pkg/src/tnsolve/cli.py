"""Command-line front end.

    tnsolve solve  SPEC.json [--tau T] [--humbucker] [--no-escalate]
                             [--layer-limit L] [--check] [--oracle-budget N]
    tnsolve count  SPEC.json
    tnsolve verify SPEC.json --assignment 0,1,1
    tnsolve oracle SPEC.json [--oracle-budget N]
    tnsolve bench  SPEC.json [--repeat K]

Reports are JSON on stdout, logs go to stderr. Exit status is 0 for a
feasible result, 2 for an infeasible one and 1 for errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
import time

from . import oracle
from .problems import build, spec_from_dict, spec_to_dict
from .problems.specs import SpecError
from .solver import Solution, SolverConfig, UnsupportedCount, VerificationError, count_amplitude, solve

log = logging.getLogger("tnsolve")

EXIT_OK, EXIT_ERROR, EXIT_INFEASIBLE = 0, 1, 2


class CliError(Exception):
    pass


def parse_spec(path: str):
    try:
        with open(path) as fh:
            text = fh.read()
    except OSError as exc:
        raise CliError(f"{path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CliError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return spec_from_dict(data)
    except SpecError as exc:
        raise CliError(f"{path}: field {exc.field!r}: {exc}") from None


def emit_spec(spec) -> str:
    return json.dumps(spec_to_dict(spec))


def _num(x):
    if x is None:
        return None
    x = float(x)
    return x if math.isfinite(x) else None


def _solution_dict(sol: Solution) -> dict:
    out = {
        "assignment": list(sol.assignment),
        "feasible": sol.feasible,
        "cost": _num(sol.cost),
        "margins": [float(m) for m in sol.margins],
        "log_amplitude": _num(sol.log_amplitude),
        "tau_used": _num(sol.tau_used),
        "converged": sol.converged,
    }
    if "histogram" in sol.extras:
        out["histogram"] = sol.extras["histogram"]
    return out


def _oracle_dict(res: oracle.OracleResult) -> dict:
    return {
        "best_cost": _num(res.best_cost),
        "argmin": [list(x) for x in res.argmin[:16]],
        "argmin_count": len(res.argmin),
        "feasible_count": res.feasible_count,
        "evaluations": res.evaluations,
    }


def _config(args) -> SolverConfig:
    return SolverConfig(tau=args.tau, humbucker=args.humbucker, escalate=not args.no_escalate,
                        layer_limit=args.layer_limit)


def _echo(spec) -> dict:
    return {"family": spec.family, "variables": len(spec.dims()), "states": spec.n_states,
            "data": spec_to_dict(spec)}


def cmd_solve(spec, args) -> tuple[dict, int]:
    config = _config(args)
    if args.plan_debug:
        net, _ = build(spec, config.tau or 1.0, fixed={}, layer_limit=config.layer_limit)
        sys.stderr.write(net.to_text())
    start = time.perf_counter()
    sol = solve(spec, config)
    elapsed = time.perf_counter() - start
    report = {
        "command": "solve",
        "spec": _echo(spec),
        "config": {"tau": _num(sol.tau_used), "mode": config.mode, "escalate": config.escalate,
                   "layer_limit": config.layer_limit},
        "solution": _solution_dict(sol),
        "timings": {"total_seconds": elapsed, "step_seconds": sol.extras.get("step_seconds", [])},
    }
    code = EXIT_OK if sol.feasible else EXIT_INFEASIBLE
    if args.check:
        try:
            ref = oracle.enumerate_spec(spec, args.oracle_budget, keep_feasible=False)
        except oracle.BudgetExceeded as exc:
            report["oracle"] = {"skipped": str(exc)}
        else:
            report["oracle"] = _oracle_dict(ref)
            agree = (sol.feasible == ref.is_feasible) and (not sol.feasible or sol.cost == ref.best_cost)
            report["oracle"]["agrees"] = agree
            if not agree:
                log.error("solver and oracle disagree")
                code = EXIT_ERROR
    return report, code


def cmd_count(spec, args) -> tuple[dict, int]:
    raw = count_amplitude(spec)
    n = int(round(raw))
    report = {"command": "count", "spec": _echo(spec), "count": n, "raw": raw}
    return report, EXIT_OK if n > 0 else EXIT_INFEASIBLE


def cmd_verify(spec, args) -> tuple[dict, int]:
    if args.assignment is None:
        raise CliError("verify needs --assignment")
    try:
        x = [int(v) for v in args.assignment.split(",") if v.strip()]
    except ValueError:
        raise CliError("--assignment takes comma-separated integers") from None
    ok, cost = oracle.verify(spec, x)
    report = {"command": "verify", "spec": _echo(spec), "assignment": x, "feasible": ok, "cost": _num(cost)}
    return report, EXIT_OK if ok else EXIT_INFEASIBLE


def cmd_oracle(spec, args) -> tuple[dict, int]:
    if spec.family == "knapsack":
        ref = oracle.knapsack_dp(spec)
    else:
        ref = oracle.enumerate_spec(spec, args.oracle_budget, keep_feasible=False)
    report = {"command": "oracle", "spec": _echo(spec), "oracle": _oracle_dict(ref)}
    return report, EXIT_OK if ref.is_feasible else EXIT_INFEASIBLE


def cmd_bench(spec, args) -> tuple[dict, int]:
    config = _config(args)
    times, sol = [], None
    for _ in range(args.repeat):
        start = time.perf_counter()
        sol = solve(spec, config)
        times.append(time.perf_counter() - start)
    report = {"command": "bench", "spec": _echo(spec), "repeat": args.repeat,
              "seconds": times, "best_seconds": min(times), "solution": _solution_dict(sol)}
    return report, EXIT_OK if sol.feasible else EXIT_INFEASIBLE


COMMANDS = {"solve": cmd_solve, "count": cmd_count, "verify": cmd_verify, "oracle": cmd_oracle, "bench": cmd_bench}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tnsolve", description="Solve combinatorial problems by tensor-network contraction.")
    p.add_argument("command", choices=sorted(COMMANDS))
    p.add_argument("spec", help="JSON problem file with a 'family' field")
    p.add_argument("--tau", type=float, default=None, help="imaginary time (default: 1 / largest cost term)")
    p.add_argument("--humbucker", action="store_true", help="sum free variables with phase vectors")
    p.add_argument("--no-escalate", action="store_true", help="single run at the starting tau")
    p.add_argument("--layer-limit", type=int, default=None, help="filter layers per step (approximate mode)")
    p.add_argument("--check", action="store_true", help="compare with brute force when within budget")
    p.add_argument("--oracle-budget", type=int, default=oracle.DEFAULT_BUDGET)
    p.add_argument("--seed", type=int, default=None, help="reserved for randomized runs")
    p.add_argument("--plan-debug", action="store_true", help="print the network wiring to stderr")
    p.add_argument("--assignment", default=None, help="values for verify, e.g. 0,1,1")
    p.add_argument("--repeat", type=int, default=3, help="bench repetitions")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        spec = parse_spec(args.spec)
        report, code = COMMANDS[args.command](spec, args)
        if args.seed is not None:
            report["seed"] = args.seed
    except (CliError, UnsupportedCount, VerificationError, oracle.OracleError, ValueError) as exc:
        log.error("%s", exc)
        print(json.dumps({"command": args.command, "error": str(exc)}))
        return EXIT_ERROR
    print(json.dumps(report))
    return code


if __name__ == "__main__":
    raise SystemExit(main())
