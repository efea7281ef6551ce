"""Tensor networks: wiring, contraction planning and execution, and the
half partial trace used to read one variable at a time.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .tensor import (
    DegenerateTensor,
    SparseTensor,
    contract_pair,
    make_phase,
    make_plus,
    make_projection,
    normalize_max,
)

Slot = tuple[int, int]


class NetworkError(ValueError):
    pass


class InfeasibleSignal(Exception):
    """The half partial trace vanished: no admissible completion exists."""


@dataclass(frozen=True)
class TensorNetwork:
    nodes: Mapping[int, SparseTensor]
    bonds: tuple[tuple[Slot, Slot], ...]
    open_legs: Mapping[str, Slot]

    def __post_init__(self):
        seen: dict[Slot, str] = {}
        for (a, b) in self.bonds:
            for s in (a, b):
                if s in seen:
                    raise NetworkError(f"slot {s} used twice")
                seen[s] = "bond"
            if self._extent(a) != self._extent(b):
                raise NetworkError(f"bond {a}-{b} joins extents {self._extent(a)} and {self._extent(b)}")
        for label, s in self.open_legs.items():
            if s in seen:
                raise NetworkError(f"slot {s} of open leg {label!r} already used")
            self._extent(s)
            seen[s] = label
        for nid, t in self.nodes.items():
            for slot in range(t.ndim):
                if (nid, slot) not in seen:
                    raise NetworkError(f"slot {(nid, slot)} is neither bonded nor open")

    def _extent(self, s: Slot) -> int:
        nid, slot = s
        if nid not in self.nodes or not 0 <= slot < self.nodes[nid].ndim:
            raise NetworkError(f"unknown slot {s}")
        return self.nodes[nid].dims[slot]

    def leg_extent(self, label: str) -> int:
        return self._extent(self.open_legs[label])

    def to_text(self) -> str:
        """Line-oriented debug description of the wiring."""
        lines = []
        for nid in sorted(self.nodes):
            dims = ",".join(str(d) for d in self.nodes[nid].dims)
            lines.append(f"node {nid} dims={dims}")
        for (a, b) in self.bonds:
            lines.append(f"bond {a[0]}.{a[1]} {b[0]}.{b[1]}")
        for label, (n, s) in self.open_legs.items():
            lines.append(f"open {label} {n}.{s}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class VariableLayout:
    """Ordered problem variables and the open leg each one is read from.

    ``log_shift`` is the constant log factor a builder removed from its
    amplitudes: the network value times ``exp(log_shift)`` is the true
    weighted sum.
    """

    variables: tuple[tuple[str, int], ...]
    legs: Mapping[str, str] = field(default_factory=dict)
    log_shift: float = 0.0

    def __post_init__(self):
        labels = [v for v, _ in self.variables]
        if len(set(labels)) != len(labels):
            raise NetworkError("variable labels must be unique")

    @property
    def labels(self) -> list[str]:
        return [v for v, _ in self.variables]

    @property
    def dims(self) -> list[int]:
        return [d for _, d in self.variables]

    def leg(self, label: str) -> str:
        return self.legs.get(label, label)

    def check(self, net: TensorNetwork) -> None:
        for label, dim in self.variables:
            leg = self.leg(label)
            if leg not in net.open_legs:
                raise NetworkError(f"variable {label!r} has no open leg")
            if net.leg_extent(leg) != dim:
                raise NetworkError(f"variable {label!r}: leg extent {net.leg_extent(leg)} != {dim}")


@dataclass(frozen=True)
class ContractionPlan:
    steps: tuple[tuple[int, int], ...]
    predicted_sizes: tuple[tuple[int, float], ...]

    @property
    def max_volume(self) -> float:
        return max((v for _, v in self.predicted_sizes), default=1.0)


# -- planning -------------------------------------------------------------


def _leg_keys(net: TensorNetwork):
    """Per node: list of leg keys (hashable) and the extent of each key."""
    keys: dict[int, list] = {nid: [None] * t.ndim for nid, t in net.nodes.items()}
    extent: dict = {}
    for bi, (a, b) in enumerate(net.bonds):
        key = ("b", bi)
        keys[a[0]][a[1]] = key
        keys[b[0]][b[1]] = key
        extent[key] = net.nodes[a[0]].dims[a[1]]
    for label, (n, s) in net.open_legs.items():
        key = ("o", label)
        keys[n][s] = key
        extent[key] = net.nodes[n].dims[s]
    return keys, extent


def _merged_legs(la: list, lb: list) -> list:
    shared = set(la) & set(lb)
    return [k for k in la if k not in shared] + [k for k in lb if k not in shared]


def _chain_order(keys: dict[int, list]) -> list[int] | None:
    """Node order if the network is a simple path, else None."""
    owner: dict = {}
    adj: dict[int, set] = {n: set() for n in keys}
    for n, ks in keys.items():
        for k in ks:
            if k[0] == "b":
                if k in owner and owner[k] != n:
                    adj[n].add(owner[k])
                    adj[owner[k]].add(n)
                owner[k] = n
    n_nodes = len(keys)
    if n_nodes < 2:
        return None
    if any(len(s) > 2 for s in adj.values()):
        return None
    if sum(len(s) for s in adj.values()) != 2 * (n_nodes - 1):
        return None
    ends = sorted(n for n, s in adj.items() if len(s) == 1)
    if len(ends) != 2:
        return None
    order, prev, cur = [ends[0]], None, ends[0]
    while True:
        nxt = [m for m in adj[cur] if m != prev]
        if not nxt:
            break
        prev, cur = cur, nxt[0]
        order.append(cur)
    return order if len(order) == n_nodes else None


def plan_contraction(net: TensorNetwork) -> ContractionPlan:
    """Greedy pairwise schedule minimizing the dense volume of each merge result.

    Ties go to fewer result legs, then to the lowest node-id pair. The merged
    node keeps the first id of its pair. Simple chains are swept end to end
    starting from the end with the lowest id. Disconnected components are
    joined by outer products once nothing adjacent is left.
    """
    keys, extent = _leg_keys(net)

    def volume(ks) -> float:
        return float(math.prod(extent[k] for k in ks))

    steps: list[tuple[int, int]] = []
    sizes: list[tuple[int, float]] = []

    order = _chain_order(keys)
    if order is not None:
        cur = list(keys[order[0]])
        for nxt in order[1:]:
            cur = _merged_legs(cur, keys[nxt])
            steps.append((order[0], nxt))
            sizes.append((len(cur), volume(cur)))
        return ContractionPlan(tuple(steps), tuple(sizes))

    legs = {n: list(ks) for n, ks in keys.items()}
    bond_owner: dict = {}
    for n, ks in legs.items():
        for k in ks:
            if k[0] == "b":
                bond_owner.setdefault(k, set()).add(n)
    version = {n: 0 for n in legs}
    heap: list = []

    def neighbours(n: int) -> set[int]:
        out = set()
        for k in legs[n]:
            if k[0] == "b":
                out |= bond_owner[k]
        out.discard(n)
        return out

    def push(a: int, b: int):
        a, b = min(a, b), max(a, b)
        merged = _merged_legs(legs[a], legs[b])
        heapq.heappush(heap, (volume(merged), len(merged), a, b, version[a], version[b]))

    for n in legs:
        for m in neighbours(n):
            if n < m:
                push(n, m)

    while heap:
        vol, nl, a, b, va, vb = heapq.heappop(heap)
        if a not in legs or b not in legs or version[a] != va or version[b] != vb:
            continue
        merged = _merged_legs(legs[a], legs[b])
        for k in legs[b]:
            if k[0] == "b":
                bond_owner[k].discard(b)
                bond_owner[k].add(a)
        for k in set(legs[a]) & set(legs[b]):
            bond_owner.pop(k, None)
        del legs[b]
        legs[a] = merged
        version[a] += 1
        steps.append((a, b))
        sizes.append((len(merged), volume(merged)))
        for m in neighbours(a):
            push(a, m)

    rest = sorted(legs)
    while len(rest) > 1:
        a, b = rest[0], rest[1]
        legs[a] = legs[a] + legs.pop(b)
        steps.append((a, b))
        sizes.append((len(legs[a]), volume(legs[a])))
        rest.pop(1)
    return ContractionPlan(tuple(steps), tuple(sizes))


# -- execution -----------------------------------------------------------


def _empty_result(net: TensorNetwork) -> SparseTensor:
    dims = [net.leg_extent(label) for label in net.open_legs]
    return SparseTensor.from_arrays(dims, np.zeros((0, len(dims))), np.zeros(0))


def contract(net: TensorNetwork, plan: ContractionPlan | None = None) -> tuple[SparseTensor, float]:
    """Contract the whole network with running max-normalization.

    Returns the tensor over the open legs (in declaration order) and the
    accumulated natural-log scale; the true result is
    ``tensor * exp(log_scale)``. An identically zero network yields an empty
    tensor and ``-inf``.
    """
    if plan is None:
        plan = plan_contraction(net)
    keys, _ = _leg_keys(net)
    tensors: dict[int, SparseTensor] = {}
    log_scale = 0.0
    try:
        for nid, t in net.nodes.items():
            tensors[nid], ls = normalize_max(t)
            log_scale += ls
        for a, b in plan.steps:
            la, lb = keys[a], keys[b]
            shared = [k for k in la if k in set(lb)]
            pa = [la.index(k) for k in shared]
            pb = [lb.index(k) for k in shared]
            merged = contract_pair(tensors[a], pa, tensors.pop(b), pb)
            keys[a] = _merged_legs(la, lb)
            del keys[b]
            tensors[a], ls = normalize_max(merged)
            log_scale += ls
    except DegenerateTensor:
        return _empty_result(net), -math.inf

    if len(tensors) != 1:
        raise NetworkError("plan does not reduce the network to a single node")
    (root,) = tensors
    result, ks = tensors[root], keys[root]
    perm = [ks.index(("o", label)) for label in net.open_legs]
    return result.transpose(perm), log_scale


def contract_value(net: TensorNetwork, plan: ContractionPlan | None = None) -> SparseTensor:
    """Contract and fold the log scale back into the amplitudes."""
    t, ls = contract(net, plan)
    if ls == -math.inf:
        return t
    return SparseTensor.from_arrays(t.dims, t.indices, t.values * math.exp(ls), tol=0.0)


def attach_boundaries(net: TensorNetwork, vectors: Mapping[str, SparseTensor]) -> TensorNetwork:
    """Close several open legs with one-leg vectors at once."""
    nodes = dict(net.nodes)
    bonds = list(net.bonds)
    next_id = max(nodes, default=-1) + 1
    for label, vec in vectors.items():
        if label not in net.open_legs:
            raise NetworkError(f"unknown open leg {label!r}")
        if vec.ndim != 1:
            raise NetworkError("boundary must be a one-leg vector")
        if vec.dims[0] != net.leg_extent(label):
            raise NetworkError(
                f"boundary extent {vec.dims[0]} does not match leg {label!r} ({net.leg_extent(label)})"
            )
        nodes[next_id] = vec
        bonds.append((net.open_legs[label], (next_id, 0)))
        next_id += 1
    open_legs = {k: v for k, v in net.open_legs.items() if k not in vectors}
    return TensorNetwork(nodes, tuple(bonds), open_legs)


def attach_boundary(net: TensorNetwork, label: str, vector: SparseTensor) -> TensorNetwork:
    return attach_boundaries(net, {label: vector})


def half_partial_trace(
    net: TensorNetwork,
    layout: VariableLayout,
    target: str,
    fixed: Mapping[str, int],
    mode: str = "plus",
    weights: Mapping[str, np.ndarray] | None = None,
) -> tuple[np.ndarray, float]:
    """Amplitude vector of ``target`` with fixed variables projected and the rest summed.

    ``mode="phase"`` sums the free variables with evenly spread unit phases
    instead of ones. ``weights`` optionally rescales the summing vector of a
    free variable entry by entry. Open legs not bound to a variable are
    summed with ones. The returned vector is max-normalized; ``log_scale``
    restores it.
    """
    if target in fixed:
        raise NetworkError(f"target {target!r} is already fixed")
    labels = set(layout.labels)
    if target not in labels:
        raise NetworkError(f"unknown target {target!r}")
    for label in fixed:
        if label not in labels:
            raise NetworkError(f"unknown fixed variable {label!r}")
    if mode not in ("plus", "phase"):
        raise NetworkError(f"unknown mode {mode!r}")

    leg_of = {v: layout.leg(v) for v in layout.labels}
    var_legs = set(leg_of.values())
    boundaries: dict[str, SparseTensor] = {}
    for label, dim in layout.variables:
        if label == target:
            continue
        if label in fixed:
            boundaries[leg_of[label]] = make_projection(dim, int(fixed[label]))
        else:
            vec = make_phase(dim) if mode == "phase" else make_plus(dim)
            if weights is not None and label in weights:
                vec = SparseTensor.from_arrays((dim,), vec.indices, vec.values * weights[label][vec.indices[:, 0]], tol=0.0)
            boundaries[leg_of[label]] = vec
    for leg in net.open_legs:
        if leg not in var_legs:
            boundaries[leg] = make_plus(net.leg_extent(leg))

    closed = attach_boundaries(net, boundaries)
    vec, log_scale = contract(closed)
    if log_scale == -math.inf or vec.nnz == 0:
        raise InfeasibleSignal(f"no admissible completion when reading {target!r}")
    return vec.to_dense(), log_scale
