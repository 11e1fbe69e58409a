"""Discrete steady-state switch-level solver over {GND, HALF, VDD}.

Node voltages are resolved by fixed-point iteration: each round, device
conduction is recomputed from the current gate levels, then every net takes
the level implied by its conducting paths to the rails and the input nets.
A net with paths to both rails settles at the half level and is recorded as
a voltage-division event; a net with no path floats (holds charge during
transition simulation).

The core is batched: a whole sweep of input states is solved in one numpy
pass, which keeps exhaustive truth tables and multi-thousand-state ripple
carry sweeps cheap.
"""

from __future__ import annotations

import heapq
import itertools
import json
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, OscillationError, UnresolvableError
from .netlist import Netlist, Polarity, RAILS, domain_encoding
from .trits import Encoding, Level, decode, level_volts

# Internal level codes; X never survives a successful solve.
CODE_G, CODE_H, CODE_V, CODE_X, CODE_Z = range(5)

_LEVEL_OF_CODE = (Level.GND, Level.HALF, Level.VDD, Level.X, Level.Z)
_CODE_OF_LEVEL = {lv: i for i, lv in enumerate(_LEVEL_OF_CODE)}

# Drive-mask bits: which strongly driven levels reach a net.
_BIT_G, _BIT_H, _BIT_V = 1, 2, 4

# Resolved level for each drive-mask value 0..7; any mixed mask sits at HALF.
_MASK_TO_CODE = np.array(
    [CODE_Z, CODE_G, CODE_H, CODE_H, CODE_V, CODE_H, CODE_H, CODE_H], dtype=np.int8
)


def conduction(polarity: Polarity, vt, gate: Level, vdd: float = 0.9) -> bool:
    """Whether a device conducts for the given gate level.

    N devices compare the gate voltage against the threshold referenced to
    GND; P devices compare the gate-to-supply drop.  Unresolved or floating
    gates do not conduct.
    """
    if gate not in (Level.GND, Level.HALF, Level.VDD):
        return False
    gv = level_volts(gate, vdd)
    if polarity is Polarity.N:
        return gv >= vt.vt_volts
    return (vdd - gv) >= vt.vt_volts


@dataclass
class SolveResult:
    """Settled node levels plus the events observed on the way there."""

    levels: dict[str, Level]
    division_events: frozenset[str]
    floating: frozenset[str]
    settle_rounds: int
    swing_warnings: list = field(default_factory=list)


class SwingWarning(tuple):
    """(net, polarity, headroom_volts) for a degraded rail pass."""

    __slots__ = ()

    def __new__(cls, net, polarity, headroom):
        return tuple.__new__(cls, (net, polarity, headroom))

    @property
    def net(self):
        return self[0]

    @property
    def polarity(self):
        return self[1]

    @property
    def headroom(self):
        return self[2]


class CompiledNetlist:
    """Index-based view of a netlist, reused across many solves."""

    def __init__(self, n: Netlist):
        self.netlist = n
        self.nets = n.nets()
        self.index = {name: i for i, name in enumerate(self.nets)}
        self.n_nets = len(self.nets)

        self.input_idx = np.array(
            [self.index[name] for name in n.input_names], dtype=np.intp
        )
        self.output_idx = np.array(
            [self.index[name] for name in n.output_names], dtype=np.intp
        )
        driver = np.zeros(self.n_nets, dtype=bool)
        for rail in RAILS:
            driver[self.index[rail]] = True
        driver[self.input_idx] = True
        self.is_driver = driver
        self.nondriver_idx = np.flatnonzero(~driver)
        self.gnd_idx = self.index["GND"]
        self.vdd_idx = self.index["VDD"]

        devs = n.devices
        self.n_devices = len(devs)
        self.dev_gate = np.array([self.index[d.gate] for d in devs], dtype=np.intp)
        self.dev_a = np.array([self.index[d.source] for d in devs], dtype=np.intp)
        self.dev_b = np.array([self.index[d.drain] for d in devs], dtype=np.intp)
        lut = np.zeros((max(self.n_devices, 1), 5), dtype=bool)
        for i, d in enumerate(devs):
            for code, lv in enumerate(_LEVEL_OF_CODE):
                lut[i, code] = conduction(d.polarity, d.vt, lv, n.vdd)
        self.dev_lut = lut

        # Per-direction device groupings for duplicate-free scatter of
        # drive-mask contributions (bitwise_or.reduceat over sorted targets).
        self._dir = []
        for tgt, src in ((self.dev_a, self.dev_b), (self.dev_b, self.dev_a)):
            keep = np.flatnonzero(~driver[tgt]) if self.n_devices else np.array([], dtype=np.intp)
            order = keep[np.argsort(tgt[keep], kind="stable")]
            tgt_sorted = tgt[order]
            starts = np.flatnonzero(
                np.r_[True, tgt_sorted[1:] != tgt_sorted[:-1]]
            ) if order.size else np.array([], dtype=np.intp)
            group_net = tgt_sorted[starts] if order.size else np.array([], dtype=np.intp)
            self._dir.append((order, src[order], starts, group_net))

    # -- batched fixed-point solve ------------------------------------

    def solve_batch(self, input_codes: np.ndarray, prev: np.ndarray | None = None):
        """Solve many input states at once.

        input_codes: (S, n_inputs) level codes.
        prev:        optional (S, n_nets) seed levels for transition solves.

        Returns (levels, masks, rounds, stable) arrays; ``stable`` is False
        for states that failed to reach a fixed point within the budget.
        """
        S = input_codes.shape[0]
        N = self.n_nets
        lv = np.full((S, N), CODE_X, dtype=np.int8)
        lv[:, self.gnd_idx] = CODE_G
        lv[:, self.vdd_idx] = CODE_V
        if self.input_idx.size:
            lv[:, self.input_idx] = input_codes
        hold = None
        if prev is not None:
            nd = self.nondriver_idx
            lv[:, nd] = prev[:, nd]
            hold = prev

        rounds = np.zeros(S, dtype=np.int64)
        budget = max(4 * N, 8)
        masks = np.zeros((S, N), dtype=np.uint8)
        stable = np.zeros(S, dtype=bool)

        for _ in range(budget):
            masks = self._propagate(lv)
            newlv = self._levels_from_masks(masks, hold)
            changed = (newlv[:, self.nondriver_idx] != lv[:, self.nondriver_idx]).any(axis=1)
            lv[:, self.nondriver_idx] = newlv[:, self.nondriver_idx]
            rounds += changed
            if not changed.any():
                stable[:] = True
                break
        else:
            # one more recompute to identify which states are still moving
            masks = self._propagate(lv)
            newlv = self._levels_from_masks(masks, hold)
            stable = ~(
                (newlv[:, self.nondriver_idx] != lv[:, self.nondriver_idx]).any(axis=1)
            )
        return lv, masks, rounds, stable

    def _propagate(self, lv: np.ndarray) -> np.ndarray:
        """Inner fixed point: push driver levels along conducting channels."""
        S, N = lv.shape
        masks = np.zeros((S, N), dtype=np.uint8)
        drv = np.flatnonzero(self.is_driver)
        code = lv[:, drv]
        m = np.zeros_like(code, dtype=np.uint8)
        for c, bit in ((CODE_G, _BIT_G), (CODE_H, _BIT_H), (CODE_V, _BIT_V)):
            m |= np.uint8(bit) * (code == c).astype(np.uint8)
        masks[:, drv] = m
        if not self.n_devices:
            return masks

        gate_codes = lv[:, self.dev_gate]
        on = self.dev_lut[np.arange(self.n_devices)[None, :], gate_codes]

        while True:
            before = masks.copy()
            for order, src, starts, group_net in self._dir:
                if not order.size:
                    continue
                contrib = masks[:, src] * on[:, order]
                reduced = np.bitwise_or.reduceat(contrib, starts, axis=1)
                masks[:, group_net] |= reduced
            if np.array_equal(masks, before):
                return masks

    def _levels_from_masks(self, masks, hold):
        newlv = _MASK_TO_CODE[masks]
        if hold is not None:
            held = (masks == 0) & (hold <= CODE_V)
            newlv = np.where(held, hold, newlv)
        return newlv

    # -- helpers --------------------------------------------------------

    def codes_for_inputs(self, assignment: dict[str, Level]) -> np.ndarray:
        row = np.empty(len(self.netlist.inputs), dtype=np.int8)
        for i, (name, dom) in enumerate(self.netlist.inputs):
            if name not in assignment:
                raise DomainError(f"input {name!r} not assigned")
            level = assignment[name]
            if level not in dom:
                raise DomainError(f"input {name!r} may not take level {level}")
            row[i] = _CODE_OF_LEVEL[level]
        return row

    def result_from_state(self, lv_row, mask_row, rounds, from_scratch=True) -> SolveResult:
        levels = {}
        division = set()
        floating = set()
        for i, name in enumerate(self.nets):
            code = lv_row[i]
            levels[name] = _LEVEL_OF_CODE[code]
            if (mask_row[i] & (_BIT_G | _BIT_V)) == (_BIT_G | _BIT_V):
                division.add(name)
            if not self.is_driver[i] and mask_row[i] == 0:
                floating.add(name)
        if from_scratch:
            for name in self.netlist.output_names:
                if levels[name] is Level.Z:
                    raise UnresolvableError(f"output {name!r} floats with no previous state")
        return SolveResult(
            levels=levels,
            division_events=frozenset(division),
            floating=frozenset(floating),
            settle_rounds=int(rounds),
        )


_COMPILE_CACHE: dict[int, tuple[Netlist, CompiledNetlist]] = {}


def compiled(n: Netlist) -> CompiledNetlist:
    """Compile (or fetch a cached compilation of) a netlist."""
    entry = _COMPILE_CACHE.get(id(n))
    if entry is not None and entry[0] is n:
        return entry[1]
    cn = CompiledNetlist(n)
    if len(_COMPILE_CACHE) > 256:
        _COMPILE_CACHE.clear()
    _COMPILE_CACHE[id(n)] = (n, cn)
    return cn


def solve_state(
    n: Netlist, inputs: dict[str, Level], prev: SolveResult | None = None
) -> SolveResult:
    """Resolve all node levels for one input assignment.

    ``prev`` seeds the iteration with an earlier fixed point; floating nets
    then hold their previous charge instead of reading as errors.
    """
    cn = compiled(n)
    row = cn.codes_for_inputs(inputs)[None, :]
    prev_codes = None
    if prev is not None:
        prev_codes = np.array(
            [[_CODE_OF_LEVEL[prev.levels.get(name, Level.Z)] for name in cn.nets]],
            dtype=np.int8,
        )
    lv, masks, rounds, stable = cn.solve_batch(row, prev_codes)
    if not stable[0]:
        raise OscillationError(f"no fixed point within {4 * cn.n_nets} rounds")
    return cn.result_from_state(lv[0], masks[0], rounds[0], from_scratch=prev is None)


def input_space(
    n: Netlist, overrides: dict[str, frozenset[Level]] | None = None
) -> list[tuple[Level, ...]]:
    """All input level combinations, lexicographic in declared input order."""
    axes = []
    for name, dom in n.inputs:
        if overrides and name in overrides:
            dom = overrides[name]
        axes.append(sorted(dom, key=lambda lv: _CODE_OF_LEVEL[lv]))
    return [tuple(pt) for pt in itertools.product(*axes)]


def _sweep(n: Netlist, points: list[tuple[Level, ...]]):
    cn = compiled(n)
    codes = np.array(
        [[_CODE_OF_LEVEL[lv] for lv in pt] for pt in points], dtype=np.int8
    ).reshape(len(points), len(n.inputs))
    lv, masks, rounds, stable = cn.solve_batch(codes)
    if not stable.all():
        bad = int(np.flatnonzero(~stable)[0])
        raise OscillationError(f"no fixed point at input point {points[bad]}")
    return cn, lv, masks, rounds


def truth_table(
    n: Netlist, overrides: dict[str, frozenset[Level]] | None = None
) -> dict[tuple[Level, ...], tuple[Level, ...]]:
    """Exhaustive solve over the input domain product.

    Maps each input level tuple (declared input order) to the output level
    tuple.  A floating output makes the whole sweep fail, with the offending
    input point named.
    """
    points = input_space(n, overrides)
    cn, lv, masks, rounds = _sweep(n, points)
    out = {}
    for s, pt in enumerate(points):
        row = []
        for j, name in enumerate(n.output_names):
            code = lv[s, cn.output_idx[j]]
            if code in (CODE_X, CODE_Z):
                raise UnresolvableError(f"output {name!r} unresolved at input {pt}")
            row.append(_LEVEL_OF_CODE[code])
        out[pt] = tuple(row)
    return out


def truth_signature(
    n: Netlist, overrides: dict[str, frozenset[Level]] | None = None
) -> dict[tuple[Level, ...], tuple]:
    """Like :func:`truth_table` but with outputs decoded to trits.

    Solver failures become per-point sentinels instead of raising, so two
    netlists can be compared including their error behavior.
    """
    points = input_space(n, overrides)
    sig = {}
    try:
        cn, lv, masks, rounds = _sweep(n, points)
    except OscillationError:
        # fall back to per-point solving so good points still compare
        for pt in points:
            try:
                res = solve_state(n, dict(zip(n.input_names, pt)))
                sig[pt] = _decode_outputs(n, res)
            except (OscillationError, UnresolvableError) as exc:
                sig[pt] = ("error", type(exc).__name__)
        return sig
    for s, pt in enumerate(points):
        row = []
        bad = None
        for j, name in enumerate(n.output_names):
            code = lv[s, cn.output_idx[j]]
            if code in (CODE_X, CODE_Z):
                bad = ("error", "UnresolvableError")
                break
            try:
                row.append(decode(_LEVEL_OF_CODE[code], n.output_encoding(name)))
            except DomainError:
                row.append(("level", int(code)))
        sig[pt] = bad if bad else tuple(row)
    return sig


def _decode_outputs(n: Netlist, res: SolveResult):
    row = []
    for name, enc in n.outputs:
        try:
            row.append(decode(res.levels[name], enc))
        except DomainError:
            row.append(("level", res.levels[name].value))
    return tuple(row)


def decoded_truth(n: Netlist) -> dict[tuple[int, ...], tuple[int, ...]]:
    """Truth table decoded to trits on both sides.

    Inputs decode through their declared domain (binary inputs read VDD as
    logic 1), outputs through their declared encoding.
    """
    table = truth_table(n)
    out = {}
    for pt, levels in table.items():
        key = tuple(
            decode(lv, domain_encoding(dom)) for lv, (name, dom) in zip(pt, n.inputs)
        )
        val = tuple(
            decode(lv, enc) for lv, (name, enc) in zip(levels, n.outputs)
        )
        out[key] = val
    return out


def division_counts(n: Netlist, net: str | None = None) -> list[int]:
    """Division-event count per stable input state (whole netlist or one net)."""
    points = input_space(n)
    cn, lv, masks, rounds = _sweep(n, points)
    div = (masks & (_BIT_G | _BIT_V)) == (_BIT_G | _BIT_V)
    if net is not None:
        idx = cn.index[net]
        return [int(div[s, idx]) for s in range(len(points))]
    return [int(div[s].sum()) for s in range(len(points))]


# -- pattern simulation ------------------------------------------------


@dataclass
class MetricsReport:
    """Discrete proxies standing in for analog delay and power figures."""

    delay_rounds: int
    static_div_mean: float
    activity: float
    device_total: int
    warnings: list = field(default_factory=list)

    def to_json(self) -> str:
        return json.dumps(
            {
                "delay_rounds": self.delay_rounds,
                "static_div_mean": self.static_div_mean,
                "activity": self.activity,
                "device_total": self.device_total,
                "warnings": [list(w) for w in self.warnings],
            },
            indent=2,
            sort_keys=True,
        )


def simulate_pattern(n: Netlist, rows: list[tuple[Level, ...]]):
    """Run an ordered list of input vectors, seeding each solve with the last.

    Returns (trace, report).  The trace is one dict of net levels per step;
    the report carries the delay proxy (max settling rounds over the
    transitions), the static proxy (mean division-event count over the
    settled states) and the voltage-weighted switching activity.
    """
    if not rows:
        raise DomainError("pattern must contain at least one vector")
    cn = compiled(n)
    trace = []
    div_counts = []
    transition_rounds = []
    activity_sums = []
    volts = {CODE_G: 0.0, CODE_H: n.vdd / 2, CODE_V: n.vdd}
    prev_res = None
    prev_lv = None
    for step, row in enumerate(rows):
        assignment = dict(zip(n.input_names, row))
        res = solve_state(n, assignment, prev=prev_res)
        trace.append({"step": step, **{net: res.levels[net] for net in cn.nets}})
        div_counts.append(len(res.division_events))
        lv_row = np.array(
            [_CODE_OF_LEVEL[res.levels[net]] for net in cn.nets], dtype=np.int8
        )
        if prev_lv is not None:
            transition_rounds.append(res.settle_rounds)
            delta = 0.0
            for i in range(cn.n_nets):
                a, b = int(prev_lv[i]), int(lv_row[i])
                if a in volts and b in volts:
                    delta += abs(volts[b] - volts[a]) / (n.vdd / 2)
            activity_sums.append(delta)
        prev_res = res
        prev_lv = lv_row
    report = MetricsReport(
        delay_rounds=max(transition_rounds, default=0),
        static_div_mean=float(np.mean(div_counts)),
        activity=float(np.mean(activity_sums)) if activity_sums else 0.0,
        device_total=len(n.devices),
    )
    return trace, report


def trace_csv(n: Netlist, trace) -> str:
    """Render a simulation trace as CSV with one column per net."""
    nets = compiled(n).nets
    lines = ["step," + ",".join(nets)]
    for row in trace:
        lines.append(
            str(row["step"]) + "," + ",".join(row[net].value for net in nets)
        )
    return "\n".join(lines) + "\n"


# -- full-swing lint ----------------------------------------------------


def full_swing_lint(n: Netlist) -> list[SwingWarning]:
    """Flag nets that reach a rail only through the wrong device polarity.

    A net at VDD whose every conducting path to VDD passes an N device (or
    dually, GND through P devices) would be degraded in an analog circuit;
    the reported headroom is the best-case gate overdrive along the least
    degraded path.
    """
    points = input_space(n)
    cn, lv, masks, _ = _sweep(n, points)
    worst: dict[tuple[str, Polarity], float] = {}

    for s, pt in enumerate(points):
        state = lv[s]
        gate_codes = state[cn.dev_gate]
        on = cn.dev_lut[np.arange(cn.n_devices), gate_codes] if cn.n_devices else np.array([], bool)

        for target_code, good_pol, bad_pol in (
            (CODE_V, Polarity.P, Polarity.N),
            (CODE_G, Polarity.N, Polarity.P),
        ):
            drivers = [
                i
                for i in range(cn.n_nets)
                if cn.is_driver[i] and state[i] == target_code
            ]
            if not drivers:
                continue
            clean = _reach(cn, n, on, drivers, allow_pol=good_pol)
            suspects = [
                i
                for i in np.flatnonzero(~cn.is_driver)
                if state[i] == target_code and i not in clean
            ]
            for net_i in suspects:
                head = _best_headroom(cn, n, state, on, drivers, net_i, bad_pol)
                if head is None:
                    continue
                key = (cn.nets[net_i], bad_pol)
                if key not in worst or head < worst[key]:
                    worst[key] = head
    return [SwingWarning(net, pol, head) for (net, pol), head in sorted(
        worst.items(), key=lambda kv: (kv[0][0], kv[0][1].value)
    )]


def _reach(cn, n, on, start, allow_pol):
    seen = set(start)
    frontier = list(start)
    devs = n.devices
    while frontier:
        cur = frontier.pop()
        for i in range(cn.n_devices):
            if not on[i] or devs[i].polarity is not allow_pol:
                continue
            a, b = cn.dev_a[i], cn.dev_b[i]
            nxt = None
            if a == cur and b not in seen:
                nxt = b
            elif b == cur and a not in seen:
                nxt = a
            if nxt is not None and not cn.is_driver[nxt]:
                seen.add(nxt)
                frontier.append(nxt)
            elif nxt is not None:
                seen.add(nxt)
    return seen


def _best_headroom(cn, n, state, on, drivers, target, bad_pol):
    """Max-bottleneck headroom from any driver to the target net."""
    volts = {CODE_G: 0.0, CODE_H: n.vdd / 2, CODE_V: n.vdd}
    INF = float("inf")
    best = {d: INF for d in drivers}
    heap = [(-INF, d) for d in drivers]
    devs = n.devices
    adj: dict[int, list[int]] = {}
    for i in range(cn.n_devices):
        if on[i]:
            adj.setdefault(cn.dev_a[i], []).append(i)
            adj.setdefault(cn.dev_b[i], []).append(i)
    while heap:
        neg, cur = heapq.heappop(heap)
        width = -neg
        if width < best.get(cur, -INF):
            continue
        if cur == target:
            return None if width == INF else width
        for i in adj.get(cur, []):
            nxt = cn.dev_b[i] if cn.dev_a[i] == cur else cn.dev_a[i]
            if cn.is_driver[nxt] and nxt != target:
                continue
            d = devs[i]
            gv = volts.get(int(state[cn.dev_gate[i]]))
            if gv is None:
                continue
            if d.polarity is bad_pol:
                if bad_pol is Polarity.N:
                    cost = gv - d.vt.vt_volts
                else:
                    cost = (n.vdd - gv) - d.vt.vt_volts
            else:
                cost = INF
            w = min(width, cost)
            if w > best.get(nxt, -INF):
                best[nxt] = w
                heapq.heappush(heap, (-w, nxt))
    return best.get(target) if best.get(target, -INF) > -INF else None
