"""Variable-by-variable solution extraction.

Each step closes the already determined variables with projection vectors,
sums the undetermined ones with plus (or phase) vectors and reads the
amplitude vector of the next variable; its largest entry fixes the value.
For optimization problems the whole sweep is repeated at growing imaginary
time until two consecutive sweeps agree.
"""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence

import numpy as np

from . import oracle
from .network import (
    InfeasibleSignal,
    TensorNetwork,
    VariableLayout,
    attach_boundaries,
    contract,
    contract_value,
    half_partial_trace,
)
from .problems import ADAPTIVE, build, cost_scale, integral_costs, var_label
from .tensor import make_minus, make_plus, make_projection

log = logging.getLogger(__name__)


class VerificationError(RuntimeError):
    """A constraint-satisfaction answer failed the independent check."""


class UnsupportedCount(ValueError):
    pass


@dataclass(frozen=True)
class SolverConfig:
    tau: float | None = None
    humbucker: bool = False
    tolerance: float = 1e-9
    escalate: bool = True
    growth: float = 2.0
    max_rounds: int = 6
    layer_limit: int | None = None
    # a sweep is trusted only if every step was a tie or a clear win
    tie_margin: float = 1e-6
    decisive_margin: float = 0.5
    # phase mode: lexicographic cost bias, as a fraction of the integer cost gap
    phase_bias: float = 0.5

    def __post_init__(self):
        if self.tau is not None and not self.tau > 0:
            raise ValueError("tau must be positive")
        if not self.growth > 1:
            raise ValueError("growth factor must exceed 1")
        if self.layer_limit is not None and self.layer_limit < 0:
            raise ValueError("layer limit must be nonnegative")
        if not 0 <= self.phase_bias < 1:
            raise ValueError("phase bias must lie in [0, 1)")

    @property
    def mode(self) -> str:
        return "phase" if self.humbucker else "plus"

    def decisive(self, margins) -> bool:
        return all(m < self.tie_margin or m > self.decisive_margin for m in margins)


@dataclass
class Solution:
    assignment: tuple[int, ...]
    feasible: bool
    margins: tuple[float, ...] = ()
    log_amplitude: float = -math.inf
    tau_used: float | None = None
    cost: float | None = None
    converged: bool = True
    extras: dict = field(default_factory=dict)


def pick(vector: np.ndarray, tolerance: float = 1e-9) -> tuple[int, float]:
    """Index of the largest modulus (lowest index among near-ties) and the
    normalized gap to the runner-up."""
    mags = np.abs(np.asarray(vector))
    top = float(mags.max()) if mags.size else 0.0
    if top == 0.0:
        raise InfeasibleSignal("all amplitudes vanish")
    value = int(np.nonzero(mags >= top * (1.0 - tolerance))[0][0])
    rest = np.delete(mags, value)
    second = float(rest.max()) if rest.size else 0.0
    return value, 1.0 - second / top


def determine_variable(net_builder, layout: VariableLayout | None, k: int, fixed: Mapping[int, int],
                       config: SolverConfig = SolverConfig()) -> tuple[int, float]:
    """Value and margin of variable ``k`` given the values in ``fixed``.

    ``net_builder`` is a network (used with ``layout``) or a callable taking
    the fixed values by label and returning ``(network, layout)``.
    """
    value, margin, _ = _step(net_builder, layout, k, fixed, config.mode, config.tolerance)
    return value, margin


def _step(net_builder, layout, k, fixed, mode, tolerance, weights=None):
    by_label = {var_label(i): v for i, v in fixed.items()}
    if callable(net_builder):
        net, layout = net_builder(by_label)
    else:
        net = net_builder
    target = var_label(k)
    vec, log_scale = half_partial_trace(net, layout, target, by_label, mode, weights)
    biased = vec * weights[target] if weights else vec
    value, margin = pick(biased, tolerance)
    log_amp = float(math.log(abs(vec[value])) + log_scale + layout.log_shift)
    return value, margin, log_amp


def tie_weights(spec, tau: float, share: float) -> dict[str, np.ndarray] | None:
    """Per-variable factors exp(-tau * b_i * v) for a lexicographic cost bias.

    The bias of an assignment is ``share`` times its lexicographic rank over
    the number of states, so it stays below 1 and, with integer costs, never
    reorders distinct costs. It separates degenerate optima whose phases would
    otherwise cancel each other.
    """
    if share <= 0 or not integral_costs(spec):
        return None
    dims = spec.dims()
    total = math.prod(dims)
    out, stride = {}, total
    for i, d in enumerate(dims):
        stride //= d
        out[var_label(i)] = np.exp(-tau * share * stride / total * np.arange(d))
    return out


def minus_vector_value(net: TensorNetwork, layout: VariableLayout, k: int, fixed: Mapping[int, int]) -> int:
    """Binary decision through the scalar ``Omega`` obtained by closing
    variable ``k`` with the (-1, 1) vector: 1 if Omega > 0 else 0."""
    label = var_label(k)
    if dict(layout.variables)[label] != 2:
        raise ValueError("the minus-vector read-out needs a binary variable")
    by_label = {var_label(i): int(v) for i, v in fixed.items()}
    bounds = {}
    for lab, dim in layout.variables:
        leg = layout.leg(lab)
        if lab == label:
            bounds[leg] = make_minus()
        elif lab in by_label:
            bounds[leg] = make_projection(dim, by_label[lab])
        else:
            bounds[leg] = make_plus(dim)
    for leg in net.open_legs:
        if leg not in bounds:
            bounds[leg] = make_plus(net.leg_extent(leg))
    omega = contract_value(attach_boundaries(net, bounds))
    return 1 if omega.value().real > 0 else 0


def _sweep(spec, tau: float, config: SolverConfig, mode: str, fixed: Mapping[int, int]):
    """One full determination pass; None when the signal vanishes."""
    n = len(spec.dims())
    values = dict(fixed)
    margins: list[float] = []
    times: list[float] = []
    adaptive = spec.family in ADAPTIVE and config.layer_limit is not None
    weights = tie_weights(spec, tau, config.phase_bias) if mode == "phase" else None
    if adaptive:
        def source(by_label):
            return build(spec, tau, fixed=by_label, layer_limit=config.layer_limit)
        layout = None
    else:
        source, layout = build(spec, tau)
    log_amp = -math.inf
    for k in range(n):
        if k in values:
            continue
        start = time.perf_counter()
        try:
            value, margin, log_amp = _step(source, layout, k, values, mode, config.tolerance, weights)
        except InfeasibleSignal:
            log.info("signal vanished at variable %d", k)
            return None
        values[k] = value
        margins.append(margin)
        times.append(time.perf_counter() - start)
    assignment = tuple(values[k] for k in range(n))
    if len(margins) == 0:
        log_amp = _full_log_amplitude(spec, tau, assignment, config)
    return assignment, tuple(margins), log_amp, times


def _full_log_amplitude(spec, tau, assignment, config):
    net, layout = build(spec, tau, fixed={var_label(i): v for i, v in enumerate(assignment)},
                        layer_limit=config.layer_limit)
    bounds = {layout.leg(var_label(i)): make_projection(d, v)
              for i, (d, v) in enumerate(zip(spec.dims(), assignment))}
    for leg in net.open_legs:
        bounds.setdefault(leg, make_plus(net.leg_extent(leg)))
    t, ls = contract(attach_boundaries(net, bounds))
    if t.nnz == 0:
        return -math.inf
    return float(math.log(abs(t.value())) + ls + layout.log_shift)


def default_tau(spec) -> float:
    return 1.0 / cost_scale(spec)


def phase_tau_floor(spec) -> float:
    """Smallest tau at which a phase-summed sweep is trusted.

    With integer costs a unique optimum outweighs the summed modulus of all
    other states once (states - 1) * exp(-tau) < 1/2, whatever their phases.
    Below that, phase sums can be confidently wrong. Without an integer cost
    gap there is no such bound and no floor.
    """
    if not integral_costs(spec):
        return 0.0
    return math.log(2 * spec.n_states)


def _readout(spec) -> Solution:
    net, layout = build(spec, 1.0)
    bounds = {leg: make_plus(net.leg_extent(leg)) for leg in net.open_legs if leg != "cost"}
    t, ls = contract(attach_boundaries(net, bounds) if bounds else net)
    if ls == -math.inf or t.nnz == 0:
        return Solution((), False, extras={"histogram": []})
    counts = np.rint(t.to_dense().real * math.exp(ls)).astype(int)
    nz = np.nonzero(counts)[0]
    if nz.size == 0:
        return Solution((), False, extras={"histogram": counts.tolist()})
    best = int(nz[0])
    return Solution((), True, cost=float(best), log_amplitude=float(math.log(counts[best])),
                    extras={"histogram": counts.tolist()})


def solve(spec, config: SolverConfig = SolverConfig(), fixed: Mapping[int, int] | None = None) -> Solution:
    """Solve ``spec``; ``fixed`` pre-assigns variables by position."""
    fixed = dict(fixed or {})
    if spec.kind == "readout":
        return _readout(spec)

    if spec.kind in ("csp", "inversion"):
        # 0/1 amplitudes: phases could cancel genuine solutions, so always sum with ones
        run = _sweep(spec, 1.0, config, "plus", fixed)
        if run is None:
            return Solution((), False)
        assignment, margins, log_amp, times = run
        ok, cost = oracle.verify(spec, assignment)
        if not ok:
            raise VerificationError(f"{spec.family}: {assignment} violates the constraints")
        return Solution(assignment, True, margins, log_amp, None, cost, True, {"step_seconds": times})

    tau = config.tau if config.tau is not None else default_tau(spec)
    run = _sweep(spec, tau, config, config.mode, fixed)
    if run is None:
        return Solution((), False, tau_used=tau)
    converged = not config.escalate
    floor = phase_tau_floor(spec) if config.mode == "phase" else 0.0
    rounds = 0
    while config.escalate and rounds < config.max_rounds:
        rounds += 1
        nxt_tau = tau * config.growth
        nxt = _sweep(spec, nxt_tau, config, config.mode, fixed)
        if nxt is None:
            break
        agree = nxt[0] == run[0] and config.decisive(nxt[1]) and nxt_tau >= floor
        tau, run = nxt_tau, nxt
        if agree:
            converged = True
            break
    assignment, margins, log_amp, times = run
    ok, cost = oracle.verify(spec, assignment)
    if not converged:
        log.warning("%s: assignment still changing at tau=%g", spec.family, tau)
    return Solution(assignment, ok, margins, log_amp, tau, cost if ok else None, converged,
                    {"step_seconds": times, "rounds": rounds})


def count_amplitude(spec) -> float:
    """Full contraction with plus vectors on every open leg (before rounding)."""
    if spec.kind not in ("csp", "inversion"):
        raise UnsupportedCount(f"{spec.family} instances carry weighted amplitudes")
    net, _ = build(spec, 1.0)
    bounds = {leg: make_plus(net.leg_extent(leg)) for leg in net.open_legs}
    t, ls = contract(attach_boundaries(net, bounds))
    if ls == -math.inf or t.nnz == 0:
        return 0.0
    return float(t.value().real * math.exp(ls))


def count_solutions(spec) -> int:
    return int(round(count_amplitude(spec)))
