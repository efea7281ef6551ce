"""Circuit-tensorization helpers shared by the problem builders.

Every variable is wired as a *train*: a chain of tensors that each receive
the variable's value on their input leg, pass it unchanged to the next
element, and talk to the rest of the circuit through extra *port* legs. The
first element's input leg is the variable's open leg; the last element has no
pass-through output (closing it with a Plus Vector is a no-op on a copy
wire, so it is dropped). A train element with a single port leg and an
identity table is a plain copy (a 3-leg Kronecker delta).
"""

from __future__ import annotations

import itertools
from typing import Sequence

import numpy as np

from ..network import TensorNetwork, VariableLayout
from ..tensor import SparseTensor, make_plus


def var_label(i: int) -> str:
    return f"x{i}"


class CircuitBuilder:
    """Collects tensors and labelled legs, then wires them into a network.

    A leg label used by exactly two node slots becomes a bond; a label used
    once must be a declared variable or readout leg and stays open.
    """

    def __init__(self, variables: Sequence[tuple[str, int]], tau: float = 1.0):
        self.variables = list(variables)
        self.tau = float(tau)
        self.log_shift = 0.0
        self._dim = dict(self.variables)
        self._ports: dict[str, list[tuple[list[tuple[str, int]], np.ndarray]]] = {v: [] for v, _ in self.variables}
        self._local: dict[str, np.ndarray] = {}
        self._nodes: list[tuple[SparseTensor, list[str]]] = []
        self._readouts: list[tuple[str, int]] = []
        self._closed: set[str] = set()
        self._counter = itertools.count()

    def dim(self, var: str) -> int:
        return self._dim[var]

    def fresh(self, stem: str = "b") -> str:
        return f"_{stem}{next(self._counter)}"

    def copy(self, var: str) -> str:
        """Register a copy port on ``var``'s train and return its bond label."""
        label = self.fresh("c")
        d = self._dim[var]
        self._ports[var].append(([(label, d)], np.eye(d)))
        return label

    def port(self, var: str, legs: Sequence[tuple[str, int]], table) -> None:
        """Fused train element: amplitude ``table[x, *port_values]``."""
        table = np.asarray(table, dtype=np.complex128)
        expect = (self._dim[var],) + tuple(d for _, d in legs)
        if table.shape != expect:
            raise ValueError(f"port table shape {table.shape} != {expect}")
        self._ports[var].append((list(legs), table))

    def evolve(self, cost, mask=None) -> np.ndarray:
        """Amplitudes ``exp(-tau * cost)``, zero where ``mask`` is false.

        The smallest admitted cost is subtracted first to keep the table in
        range; the removed factor is accumulated in ``log_shift``.
        """
        cost = np.asarray(cost, dtype=float)
        keep = np.ones(cost.shape, bool) if mask is None else np.asarray(mask, bool)
        if not keep.any():
            return np.zeros(cost.shape)
        low = cost[keep].min()
        self.log_shift -= self.tau * low
        amp = np.exp(-self.tau * (np.where(keep, cost, low) - low))
        return np.where(keep, amp, 0.0)

    def weight(self, var: str, vector) -> None:
        """Multiply a local amplitude vector into ``var``'s train."""
        vec = np.asarray(vector, dtype=np.complex128)
        if vec.shape != (self._dim[var],):
            raise ValueError("local weight has wrong length")
        self._local[var] = self._local.get(var, np.ones(self._dim[var])) * vec

    def node(self, tensor: SparseTensor, legs: Sequence[str]) -> None:
        if len(legs) != tensor.ndim:
            raise ValueError("one label per tensor leg")
        self._nodes.append((tensor, list(legs)))

    def readout(self, label: str, dim: int) -> None:
        """Declare a non-variable open leg (e.g. a cost histogram)."""
        self._readouts.append((label, dim))

    def close(self, var: str, vector) -> None:
        """Terminate ``var``'s open leg with a fixed vector; it leaves the layout."""
        self._closed.add(var)
        self.node(_table_tensor(np.asarray(vector, dtype=np.complex128)), [var])

    def _materialize_train(self, var: str) -> None:
        d = self._dim[var]
        ports = self._ports[var]
        local = self._local.get(var)
        if not ports:
            vec = local if local is not None else np.ones(d)
            self._nodes.append((_table_tensor(vec), [var]))
            return
        prev = var
        for k, (legs, table) in enumerate(ports):
            last = k == len(ports) - 1
            if last and local is not None:
                table = table * local.reshape((d,) + (1,) * len(legs))
            labels = [prev] + [lab for lab, _ in legs]
            if last:
                self._nodes.append((_table_tensor(table), labels))
            else:
                nxt = self.fresh("t")
                self._nodes.append((_pass_tensor(table), labels + [nxt]))
                prev = nxt

    def build(self) -> tuple[TensorNetwork, VariableLayout]:
        for var, _ in self.variables:
            self._materialize_train(var)
        nodes: dict[int, SparseTensor] = {}
        uses: dict[str, list[tuple[int, int]]] = {}
        for nid, (tensor, legs) in enumerate(self._nodes):
            nodes[nid] = tensor
            for slot, lab in enumerate(legs):
                uses.setdefault(lab, []).append((nid, slot))
        free_vars = [(v, d) for v, d in self.variables if v not in self._closed]
        declared = [v for v, _ in free_vars] + [r for r, _ in self._readouts]
        bonds, open_legs = [], {}
        for lab, slots in uses.items():
            if len(slots) == 2:
                bonds.append((slots[0], slots[1]))
            elif len(slots) == 1:
                if lab not in declared:
                    raise ValueError(f"dangling leg {lab!r}")
            else:
                raise ValueError(f"leg {lab!r} used {len(slots)} times")
        for lab in declared:
            if lab in uses and len(uses[lab]) == 1:
                open_legs[lab] = uses[lab][0]
        net = TensorNetwork(nodes, tuple(bonds), open_legs)
        layout = VariableLayout(tuple(free_vars) + tuple(self._readouts), log_shift=self.log_shift)
        layout.check(net)
        return net, layout


def _table_tensor(table) -> SparseTensor:
    arr = np.asarray(table, dtype=np.complex128)
    nz = np.argwhere(arr != 0)
    return SparseTensor.from_arrays(arr.shape, nz, arr[tuple(nz.T)], tol=0.0)


def _pass_tensor(table) -> SparseTensor:
    """Train element with an extra trailing leg carrying the variable onwards."""
    arr = np.asarray(table, dtype=np.complex128)
    nz = np.argwhere(arr != 0)
    idx = np.hstack([nz, nz[:, :1]])
    return SparseTensor.from_arrays(arr.shape + (arr.shape[0],), idx, arr[tuple(nz.T)], tol=0.0)


# -- reusable filter layers ----------------------------------------------------


def count_layer_tables(dims: Sequence[int], value: int, limit: int, exact: bool) -> list[tuple[list[int], np.ndarray]]:
    """Signal tables of a counting (``<= limit``) or repetition (``== limit``) layer.

    Element ``k`` returns ``(signal_dims, table)`` where ``table`` is indexed
    by ``(x_k, *signals)``: no signal for a single variable, ``(out,)`` for
    the first, ``(in, out)`` in the middle and ``(in,)`` for the last. The
    signal counts occurrences of ``value`` so far, capped at ``limit``.
    """
    n = len(dims)
    if limit < 0:
        return [([], np.zeros(d)) for d in dims] if n else []
    s = limit + 1
    hit = [np.array([1 if x == value else 0 for x in range(d)]) for d in dims]
    tables = []
    for k, d in enumerate(dims):
        if n == 1:
            cnt = hit[0]
            ok = cnt == limit if exact else cnt <= limit
            tables.append(([], ok.astype(float)))
        elif k == 0:
            t = np.zeros((d, s))
            for x in range(d):
                if hit[0][x] <= limit:
                    t[x, hit[0][x]] = 1
            tables.append(([s], t))
        elif k < n - 1:
            t = np.zeros((d, s, s))
            for x in range(d):
                for j in range(s):
                    if j + hit[k][x] <= limit:
                        t[x, j, j + hit[k][x]] = 1
            tables.append(([s, s], t))
        else:
            t = np.zeros((d, s))
            for x in range(d):
                for j in range(s):
                    tot = j + hit[k][x]
                    if (tot == limit) if exact else (tot <= limit):
                        t[x, j] = 1
            tables.append(([s], t))
    return tables


def attach_count_layer(b: CircuitBuilder, variables: Sequence[str], value: int, limit: int, exact: bool) -> None:
    """Wire a counting/repetition layer across ``variables`` as train elements."""
    tables = count_layer_tables([b.dim(v) for v in variables], value, limit, exact)
    signal = None
    for k, (var, (sdims, table)) in enumerate(zip(variables, tables)):
        if not sdims:
            b.port(var, [], table)
            continue
        if k == 0:
            signal = b.fresh("n")
            b.port(var, [(signal, sdims[0])], table)
        elif len(sdims) == 2:
            nxt = b.fresh("n")
            b.port(var, [(signal, sdims[0]), (nxt, sdims[1])], table)
            signal = nxt
        else:
            b.port(var, [(signal, sdims[0])], table)


def _layer_mpo(dims: Sequence[int], value: int, limit: int, exact: bool) -> list[SparseTensor]:
    out = []
    tables = count_layer_tables(dims, value, limit, exact)
    for k, (sdims, table) in enumerate(tables):
        t = _pass_tensor(table)  # legs (i, *signals, mu)
        if len(sdims) == 1 and k == 0:
            t = t.transpose([0, 2, 1])  # (i, mu, nu)
        elif len(sdims) == 2:
            t = t.transpose([0, 1, 3, 2])  # (i, j, mu, nu)
        out.append(t)
    return out


def build_counting_layer(dims: Sequence[int], value: int, cap: int) -> list[SparseTensor]:
    """MPO layer admitting at most ``cap`` occurrences of ``value``.

    Leg order: first ``(i, mu, nu)``, middle ``(i, j, mu, nu)``, last
    ``(i, j, mu)``, where ``mu = i`` passes the variable through and ``j``/``nu``
    carry the running count. A single variable gives ``(i, mu)``.
    """
    if len(set(dims)) > 1:
        raise ValueError("counting layer needs uniform variable dimensions")
    return _layer_mpo(dims, value, cap, exact=False)


def build_repetition_layer(dims: Sequence[int], value: int, count: int) -> list[SparseTensor]:
    """MPO layer admitting exactly ``count`` occurrences of ``value`` (legs as above)."""
    if len(set(dims)) > 1:
        raise ValueError("repetition layer needs uniform variable dimensions")
    return _layer_mpo(dims, value, count, exact=True)


def attach_sum_chain(
    b: CircuitBuilder,
    variables: Sequence[str],
    contrib: Sequence[Sequence[int]],
    final,
    cap: int | None = None,
    saturate: bool = False,
) -> None:
    """Carry the running sum of ``contrib[k][x_k]`` along ``variables``.

    The signal after each position holds the partial sum, its extent
    tightened to the reachable prefix range. With ``cap`` partial sums above
    it are dropped (nonnegative contributions can never come back) or, with
    ``saturate``, clipped to it. ``final`` maps an integer array of totals to
    amplitudes and is applied in the last element.
    """
    n = len(variables)
    g = [np.asarray(c, dtype=np.int64) for c in contrib]
    if n == 0:
        return
    lo, hi = [], []
    a, z = 0, 0
    for row in g:
        a, z = a + int(row.min()), z + int(row.max())
        if cap is not None:
            z = min(z, cap)
            a = min(a, cap)
        lo.append(a)
        hi.append(max(z, a))

    def clip(tot):
        if cap is None:
            return tot, np.ones(tot.shape, bool)
        if saturate:
            return np.minimum(tot, cap), np.ones(tot.shape, bool)
        return tot, tot <= cap

    if n == 1:
        tot, ok = clip(g[0])
        amp = np.asarray(final(np.where(ok, tot, lo[0])), dtype=np.complex128) * ok
        b.port(variables[0], [], amp)
        return
    prev = None
    for k, var in enumerate(variables):
        d = len(g[k])
        if k == 0:
            tot, ok = clip(g[0])
            ext = hi[0] - lo[0] + 1
            t = np.zeros((d, ext))
            xs = np.nonzero(ok)[0]
            t[xs, tot[xs] - lo[0]] = 1
            prev = b.fresh("s")
            b.port(var, [(prev, ext)], t)
            continue
        e_in = hi[k - 1] - lo[k - 1] + 1
        tot, ok = clip(g[k][:, None] + (np.arange(e_in) + lo[k - 1])[None, :])
        if k == n - 1:
            amp = np.asarray(final(np.where(ok, tot, lo[k])), dtype=np.complex128) * ok
            b.port(var, [(prev, e_in)], amp)
            return
        ext = hi[k] - lo[k] + 1
        t = np.zeros((d, e_in, ext))
        xs, js = np.nonzero(ok)
        t[xs, js, tot[xs, js] - lo[k]] = 1
        nxt = b.fresh("s")
        b.port(var, [(prev, e_in), (nxt, ext)], t)
        prev = nxt


def plus_node(b: CircuitBuilder, label: str, dim: int) -> None:
    b.node(make_plus(dim), [label])
