"""Cycle-level simulation of the inter-chiplet interconnect.

Each chiplet carries one router and a fixed number of traffic endpoints.
Every arrangement edge becomes two unidirectional links with a fixed
pipeline latency and a capacity of one flit per cycle.  Routers apply
wormhole switching with per-input virtual-channel FIFOs and credit-based
backpressure.

Routing is table-based and minimal, with the smallest next-hop id breaking
ties.  VC 0 is reserved as an escape channel routed on a BFS spanning tree
rooted at vertex 0 (up toward the root, then down), which keeps the escape
layer free of cyclic channel dependencies.  A head flit blocked for
``escape_threshold`` consecutive cycles switches its packet onto the escape
channel, so the network drains even when the minimal layer deadlocks.

Traffic is Bernoulli: each endpoint starts a fixed-length packet per cycle
with probability ``injection_rate / packet_len_flits`` toward a uniformly
random other endpoint.  Runs are bit-deterministic for a given seed.
"""

from __future__ import annotations

import heapq
import math
import random
from collections import deque
from dataclasses import dataclass, field, replace
from typing import Optional

from .arrangement import AdjacencyGraph, Arrangement
from .errors import DisconnectedGraphError, SaturatedError


@dataclass
class SimConfig:
    """Knobs of one simulation run; defaults model a package-level network."""

    injection_rate: float = 0.005  # flits/cycle/endpoint, in (0, 1]
    seed: int = 0
    link_latency: int = 27
    router_latency: int = 3
    num_vcs: int = 8
    buffer_flits_per_vc: int = 8
    endpoints_per_chiplet: int = 2
    packet_len_flits: int = 4
    warmup_cycles: int = 10_000
    measure_cycles: int = 50_000
    drain_cycles: int = 140_000  # extra budget after injection stops
    escape_threshold: int = 64
    # stop a clearly saturated run before the cycle cap (used by rate probes)
    early_abort: bool = False

    def validate(self) -> None:
        if not (0.0 < self.injection_rate <= 1.0):
            raise ValueError(f"injection rate must be in (0, 1], got {self.injection_rate}")
        if self.num_vcs < 2:
            raise ValueError("need at least 2 VCs (VC 0 is the escape channel)")
        if min(self.link_latency, self.router_latency) < 1:
            raise ValueError("link and router latencies must be >= 1 cycle")
        if min(self.buffer_flits_per_vc, self.endpoints_per_chiplet, self.packet_len_flits) < 1:
            raise ValueError("buffers, endpoints, and packet length must be >= 1")
        if min(self.warmup_cycles, self.measure_cycles, self.drain_cycles) < 0:
            raise ValueError("cycle windows must be >= 0")
        if self.escape_threshold < 1:
            raise ValueError("escape threshold must be >= 1 cycle")


@dataclass(frozen=True)
class RoutingTables:
    """Per-destination next hops: minimal with min-id tie-break, plus escape."""

    dist: list[list[int]]
    min_next_hop: list[list[int]]  # [current][dest] -> neighbor (or current)
    escape_next_hop: list[list[int]]  # tree route: up to the meet point, then down
    tree_parent: list[int]  # BFS spanning tree rooted at vertex 0; root maps to -1


def compute_routes(g: AdjacencyGraph) -> RoutingTables:
    """Build the deterministic routing tables for one adjacency graph."""
    n = g.n
    adj = g.adjacency()
    dist = [g.distances_from(v) for v in range(n)]
    if n and any(min(row) < 0 for row in dist):
        raise DisconnectedGraphError("routing requires a connected graph")

    min_next = [[u] * n for u in range(n)]
    for u in range(n):
        for d in range(n):
            if u == d:
                continue
            target = dist[d][u] - 1
            # neighbors are sorted, so the first match is the smallest id
            for v in adj[u]:
                if dist[d][v] == target:
                    min_next[u][d] = v
                    break

    # BFS spanning tree rooted at 0, children discovered in ascending id order
    parent = [-1] * n
    seen = [False] * n
    seen[0] = True
    order = deque([0])
    tree_adj: list[list[int]] = [[] for _ in range(n)]
    while order:
        u = order.popleft()
        for v in adj[u]:
            if not seen[v]:
                seen[v] = True
                parent[v] = u
                tree_adj[u].append(v)
                tree_adj[v].append(u)
                order.append(v)

    # next hop along the unique tree path, for every (current, dest) pair
    escape_next = [[u] * n for u in range(n)]
    for src in range(n):
        stack = [(src, -1)]
        first_hop = {src: src}
        seen_t = [False] * n
        seen_t[src] = True
        while stack:
            u, via = stack.pop()
            for v in tree_adj[u]:
                if not seen_t[v]:
                    seen_t[v] = True
                    hop = v if u == src else via
                    first_hop[v] = hop
                    stack.append((v, hop))
        for d in range(n):
            escape_next[src][d] = first_hop[d]
    return RoutingTables(dist=dist, min_next_hop=min_next, escape_next_hop=escape_next, tree_parent=parent)


def mean_endpoint_hops(arr: Arrangement, endpoints_per_chiplet: int) -> float:
    """Mean shortest-path hops over ordered endpoint pairs (same chiplet -> 0)."""
    g = arr.graph
    e = endpoints_per_chiplet
    ne = g.n * e
    if ne < 2:
        return 0.0
    total = 0
    for v in range(g.n):
        row = g.distances_from(v)
        if min(row) < 0:
            raise DisconnectedGraphError(f"vertex {v} cannot reach every vertex")
        total += sum(row)
    return e * e * total / (ne * (ne - 1))


def analytic_zero_load(arr: Arrangement, cfg: SimConfig) -> float:
    """Contention-free packet latency: per-hop pipeline plus serialization."""
    hops = mean_endpoint_hops(arr, cfg.endpoints_per_chiplet)
    return (
        hops * (cfg.link_latency + cfg.router_latency)
        + cfg.router_latency
        + (cfg.packet_len_flits - 1)
    )


@dataclass
class SimResult:
    """Measured outcome of one run; latency stats cover the measure window."""

    offered_rate: float
    accepted_rate: float
    avg_packet_latency_cycles: float
    packets_measured: int
    saturated: bool
    drained: bool
    cycles_run: int
    packets_created: int
    packets_ejected: int
    flits_created: int
    flits_ejected: int
    analytic_zero_load_cycles: float
    seed: int

    def to_dict(self) -> dict:
        return dict(self.__dict__)


class _Packet:
    __slots__ = ("dst_ch", "eject", "size", "t_create", "escape", "measured")

    def __init__(self, dst_ch: int, eject: "_Out", size: int, t_create: int, measured: bool):
        self.dst_ch = dst_ch
        self.eject = eject
        self.size = size
        self.t_create = t_create
        self.escape = False
        self.measured = measured


class _Q:
    """One virtual-channel FIFO at a router input port."""

    __slots__ = ("q", "vc", "in_port", "router", "up", "owner", "out", "out_vc", "blocked", "registered")

    def __init__(self, router: int, in_port: int, vc: int, up: Optional["_Out"]):
        self.q: deque = deque()
        self.vc = vc
        self.in_port = in_port
        self.router = router
        self.up = up  # upstream link output to credit on dequeue, if any
        self.owner: Optional[_Packet] = None
        self.out: Optional[_Out] = None
        self.out_vc: Optional[int] = None
        self.blocked = 0
        self.registered = False


class _Out:
    """A router output: either one directed link or one ejection port."""

    __slots__ = ("is_eject", "router", "pipe", "dq", "credits", "cands", "oid")

    def __init__(self, oid: int, router: int, is_eject: bool):
        self.oid = oid
        self.router = router
        self.is_eject = is_eject
        self.pipe: deque = deque()  # (arrival_cycle, pkt, flit_idx, dst_vc)
        self.dq: list[_Q] = []  # downstream input-port queues, one per VC
        self.credits: list[int] = []
        self.cands: list[_Q] = []  # input queues currently routed here


class _Engine:
    """Shared network state for one arrangement/config pair."""

    def __init__(self, arr: Arrangement, cfg: SimConfig):
        cfg.validate()
        g = arr.graph
        if g.n > 1 and not g.is_connected():
            raise DisconnectedGraphError("simulation requires a connected arrangement")
        self.arr = arr
        self.cfg = cfg
        self.routes = compute_routes(g)
        n = g.n
        nv = cfg.num_vcs
        buf = cfg.buffer_flits_per_vc
        eps = cfg.endpoints_per_chiplet

        self.n = n
        self.num_endpoints = n * eps
        self.out_by_next: list[dict[int, _Out]] = [{} for _ in range(n)]
        self.eject_out: list[_Out] = []  # indexed by global endpoint id
        self.inj_queues: list[list[_Q]] = []  # per endpoint, one _Q per VC
        self.outputs: list[_Out] = []
        port_id = 0
        # endpoint ports first: injection queues and ejection outputs
        for u in range(n):
            for _ in range(eps):
                self.inj_queues.append([_Q(u, port_id, v, None) for v in range(nv)])
                port_id += 1
                out = _Out(len(self.outputs), u, True)
                self.outputs.append(out)
                self.eject_out.append(out)
        # one directed link per edge direction
        for u in range(n):
            for v in g.neighbors(u):
                out = _Out(len(self.outputs), u, False)
                out.dq = [_Q(v, port_id, vc, out) for vc in range(nv)]
                out.credits = [buf] * nv
                self.outputs.append(out)
                self.out_by_next[u][v] = out
                port_id += 1
        self.num_in_ports = port_id


def _sample_gap(rng: random.Random, log1mp: float) -> int:
    """Failures before the next Bernoulli success (geometric gap)."""
    u = rng.random()
    if u <= 0.0:
        return 0
    return int(math.log(u) / log1mp)


def run(arr: Arrangement, cfg: SimConfig, strict: bool = False) -> SimResult:
    """Simulate one injection rate; ``strict`` turns a failed drain into an error.

    Identical inputs give bit-identical results: the only randomness is the
    seeded traffic process, and every per-cycle iteration order is fixed.
    """
    eng = _Engine(arr, cfg)
    zero_load = analytic_zero_load(arr, cfg)
    rng = random.Random(cfg.seed)
    nv = cfg.num_vcs
    buf = cfg.buffer_flits_per_vc
    size = cfg.packet_len_flits
    rl = cfg.router_latency
    ll = cfg.link_latency
    esc_thresh = cfg.escape_threshold
    ne = eng.num_endpoints
    eps = cfg.endpoints_per_chiplet
    routes = eng.routes
    min_next = routes.min_next_hop
    esc_next = routes.escape_next_hop
    out_by_next = eng.out_by_next
    eject_out = eng.eject_out

    warm_end = cfg.warmup_cycles
    inject_end = cfg.warmup_cycles + cfg.measure_cycles
    cap = inject_end + cfg.drain_cycles

    p_pkt = cfg.injection_rate / size  # packet-start probability per cycle
    log1mp = math.log(1.0 - p_pkt) if p_pkt < 1.0 else None

    def gap() -> int:
        return 0 if log1mp is None else _sample_gap(rng, log1mp)

    # next packet-creation time per endpoint, processed in (time, endpoint) order
    heap: list[tuple[int, int]] = []
    for e in range(ne):
        heapq.heappush(heap, (gap(), e))

    sources: list[deque] = [deque() for _ in range(ne)]
    inj_cur: list[Optional[tuple[_Packet, _Q]]] = [None] * ne
    inj_idx: list[int] = [0] * ne
    active_eps: dict[int, None] = {}
    active_links: dict[_Out, None] = {}
    active_outs: dict[_Out, None] = {}
    last_in_use: list[int] = [-1] * eng.num_in_ports

    pending_credits: list[tuple[_Out, int]] = []
    pending_release: list[_Q] = []

    packets_created = 0
    packets_ejected = 0
    flits_created = 0
    flits_ejected = 0
    flits_ejected_window = 0
    lat_sum = 0
    lat_count = 0

    def register(q: _Q, pkt: _Packet) -> None:
        if q.out is None:
            u = q.router
            if pkt.dst_ch == u:
                q.out = pkt.eject
            else:
                nh = (esc_next if pkt.escape else min_next)[u][pkt.dst_ch]
                q.out = out_by_next[u][nh]
        out = q.out
        out.cands.append(q)
        q.registered = True
        if out not in active_outs:
            active_outs[out] = None

    def unregister(q: _Q) -> None:
        out = q.out
        out.cands.remove(q)
        q.registered = False
        if not out.cands:
            active_outs.pop(out, None)

    now = 0
    measure_elapsed = 0
    early_stop = False
    while now < cap:
        # 1) deliver flits leaving link pipelines this cycle
        if active_links:
            for link in list(active_links):
                pipe = link.pipe
                while pipe and pipe[0][0] <= now:
                    _, pkt, idx, vc = pipe.popleft()
                    q = link.dq[vc]
                    q.q.append((pkt, idx, now + rl))
                    if len(q.q) > buf:
                        raise AssertionError("credit accounting violated: buffer overflow")
                    if not q.registered:
                        register(q, pkt)
                if not pipe:
                    del active_links[link]

        # 2) create new packets (Bernoulli per endpoint, geometric gaps)
        if now < inject_end:
            while heap and heap[0][0] <= now:
                t, e = heapq.heappop(heap)
                r = rng.randrange(ne - 1)
                dst = r if r < e else r + 1
                measured = warm_end <= now < inject_end
                pkt = _Packet(dst // eps, eject_out[dst], size, now, measured)
                sources[e].append(pkt)
                packets_created += 1
                flits_created += size
                if e not in active_eps:
                    active_eps[e] = None
                heapq.heappush(heap, (now + 1 + gap(), e))
        elif heap:
            heap.clear()

        # 3) endpoints feed their injection queues, one flit per cycle
        if active_eps:
            for e in list(active_eps):
                cur = inj_cur[e]
                if cur is None:
                    src = sources[e]
                    if not src:
                        del active_eps[e]
                        continue
                    pkt = src[0]
                    q_free = None
                    for q in eng.inj_queues[e][1:]:  # VC 0 stays reserved
                        if q.owner is None:
                            q_free = q
                            break
                    if q_free is None:
                        continue  # all injection VCs busy this cycle
                    q_free.owner = pkt
                    inj_cur[e] = cur = (pkt, q_free)
                    inj_idx[e] = 0
                pkt, q = cur
                if len(q.q) < buf:
                    idx = inj_idx[e]
                    q.q.append((pkt, idx, now + rl))
                    if not q.registered:
                        register(q, pkt)
                    inj_idx[e] = idx + 1
                    if idx + 1 == pkt.size:
                        sources[e].popleft()
                        inj_cur[e] = None

        # 4) switch arbitration: one flit per output and per input port
        if active_outs:
            for out in list(active_outs):
                winner = None
                head_vc = -1
                for q in out.cands:
                    pkt, idx, ready = q.q[0]
                    if ready > now or last_in_use[q.in_port] == now:
                        continue
                    if out.is_eject:
                        winner = q
                        break
                    if q.out_vc is None:
                        # head flit: allocate a downstream VC with a free slot
                        if pkt.escape:
                            if out.dq[0].owner is None and out.credits[0] > 0:
                                head_vc = 0
                                winner = q
                                break
                        else:
                            for vcx in range(1, nv):
                                if out.dq[vcx].owner is None and out.credits[vcx] > 0:
                                    head_vc = vcx
                                    winner = q
                                    break
                            if winner is not None:
                                break
                    elif out.credits[q.out_vc] > 0:
                        winner = q
                        break
                if winner is not None:
                    q = winner
                    pkt, idx, _ = q.q.popleft()
                    q.blocked = 0
                    last_in_use[q.in_port] = now
                    is_tail = idx + 1 == pkt.size
                    if out.is_eject:
                        flits_ejected += 1
                        if warm_end <= now < inject_end:
                            flits_ejected_window += 1
                        if is_tail:
                            packets_ejected += 1
                            if pkt.measured:
                                lat_sum += now - pkt.t_create
                                lat_count += 1
                    else:
                        if q.out_vc is None:
                            q.out_vc = head_vc
                            out.dq[head_vc].owner = pkt
                        out.credits[q.out_vc] -= 1
                        out.pipe.append((now + ll, pkt, idx, q.out_vc))
                        if out not in active_links:
                            active_links[out] = None
                    if q.up is not None:
                        pending_credits.append((q.up, q.vc))
                    if not q.q:
                        unregister(q)
                    if is_tail:
                        pending_release.append(q)
                    # grantee drops to lowest priority for the next cycle
                    if q.registered:
                        out.cands.remove(q)
                        out.cands.append(q)
                # age blocked heads; long-blocked packets take the escape route
                # (snapshot: an escape transition re-registers the queue)
                for q in list(out.cands):
                    if q is winner or not q.q:
                        continue
                    pkt, idx, ready = q.q[0]
                    if q.out_vc is None and ready <= now:
                        q.blocked += 1
                        if q.blocked >= esc_thresh and not pkt.escape and not out.is_eject:
                            pkt.escape = True
                            q.blocked = 0
                            unregister(q)
                            q.out = None
                            register(q, pkt)

        if pending_credits:
            for out, vc in pending_credits:
                out.credits[vc] += 1
            pending_credits.clear()
        if pending_release:
            for q in pending_release:
                q.owner = None
                q.out = None
                q.out_vc = None
                q.blocked = 0
            pending_release.clear()

        if warm_end <= now < inject_end:
            measure_elapsed += 1
            if cfg.early_abort and (measure_elapsed & 2047) == 0:
                # far past saturation: latency way beyond the 3x criterion,
                # or sustained acceptance collapse
                if lat_count >= 64 and lat_sum > 4.0 * zero_load * lat_count:
                    early_stop = True
                    break
                if measure_elapsed * 2 >= cfg.measure_cycles and flits_ejected_window < (
                    0.8 * cfg.injection_rate * ne * measure_elapsed
                ):
                    early_stop = True
                    break

        now += 1
        if now >= inject_end and packets_created == packets_ejected:
            break
        if not (active_links or active_outs or active_eps):
            nxt = heap[0][0] if heap and now < inject_end else cap
            if nxt > now:
                if warm_end <= now < inject_end:
                    measure_elapsed += min(nxt, inject_end) - now
                elif now < warm_end and nxt > warm_end:
                    measure_elapsed += min(nxt, inject_end) - warm_end
                now = nxt

    drained = packets_created == packets_ejected
    cycles_run = min(now, cap)
    window = max(measure_elapsed, 1)
    accepted = flits_ejected_window / (window * ne)
    avg_latency = lat_sum / lat_count if lat_count else math.inf
    saturated = (
        not drained
        or early_stop
        or avg_latency > 3.0 * zero_load
        or accepted < 0.95 * cfg.injection_rate
    )
    if strict and not drained:
        raise SaturatedError(
            f"{packets_created - packets_ejected} packets still in flight at the "
            f"{cap}-cycle cap (rate {cfg.injection_rate})"
        )
    return SimResult(
        offered_rate=cfg.injection_rate,
        accepted_rate=accepted,
        avg_packet_latency_cycles=avg_latency,
        packets_measured=lat_count,
        saturated=saturated,
        drained=drained,
        cycles_run=cycles_run,
        packets_created=packets_created,
        packets_ejected=packets_ejected,
        flits_created=flits_created,
        flits_ejected=flits_ejected,
        analytic_zero_load_cycles=zero_load,
        seed=cfg.seed,
    )


@dataclass
class SaturationResult:
    """Outcome of the saturation search for one arrangement."""

    sat_rate: float
    zero_load_cycles: float
    probes: list[tuple[float, bool]] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "sat_rate": self.sat_rate,
            "zero_load_cycles": self.zero_load_cycles,
            "probes": [[r, ok] for r, ok in self.probes],
        }


def find_saturation(arr: Arrangement, cfg: SimConfig, bisect_iters: int = 6) -> SaturationResult:
    """Largest sustainable injection rate for an arrangement.

    A rate passes while the measured latency stays within 3x the analytic
    zero-load latency and at least 95% of the offered flits are accepted.
    The search doubles from 1/64 to bracket the boundary, then runs a fixed
    number of bisection steps; if even the smallest probe fails, the result
    degenerates to the smallest rate probed.
    """
    zero_load = analytic_zero_load(arr, cfg)
    probes: list[tuple[float, bool]] = []

    def ok(rate: float) -> bool:
        res = run(arr, replace(cfg, injection_rate=rate, early_abort=True))
        good = not res.saturated
        probes.append((rate, good))
        return good

    lo, hi = 0.0, 1.0
    rate = 1.0 / 64.0
    while rate < 1.0:
        if ok(rate):
            lo = rate
            rate *= 2.0
        else:
            hi = rate
            break
    else:
        if ok(1.0):
            return SaturationResult(1.0, zero_load, probes)
        hi = 1.0
    for _ in range(bisect_iters):
        mid = (lo + hi) / 2.0
        if ok(mid):
            lo = mid
        else:
            hi = mid
    sat = lo if lo > 0.0 else min(r for r, _ in probes)
    return SaturationResult(sat, zero_load, probes)


def throughput_tbps(
    sat_rate: float, n_chiplets: int, endpoints_per_chiplet: int, link_bw_gbps: float
) -> float:
    """Saturation throughput in Tbit/s given the per-link bandwidth."""
    return sat_rate * n_chiplets * endpoints_per_chiplet * link_bw_gbps / 1000.0
