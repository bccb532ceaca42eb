"""Distance-based analysis over messages.

Messages are compared by a convex combination of three components:

* topology: shortest-path hops between the two message nodes in the
  undirected bipartite graph, capped and normalized to [0, 1];
* time: absolute production-time difference over the corpus range;
* text: Jaccard distance between token sets (cosine available as an
  option, at the price of the metric guarantees).

With the default symmetric configuration the result is a metric, so
distance-matrix consumers (retrieval, k-medoids) get triangle-inequality
guarantees. An additive penalty for going backward in time turns it into
an asymmetric pre-metric when wanted.
"""

from __future__ import annotations

import csv
import io
import re
from dataclasses import dataclass

import numpy as np

from ._parallel import parallel_map
from .errors import AsymmetricMatrix, BadK, EmptyNetwork, UnknownMessage
from .model import TemporalTextNetwork

_TOKEN = re.compile(r"[0-9A-Za-z]+")

TEXT_METRICS = ("jaccard", "cosine")


def tokenize(text: str) -> list[str]:
    """Lowercased maximal alphanumeric runs, deduplicated, in first-seen
    order. '#'/'@' prefixes fall away with the other punctuation."""
    return list(dict.fromkeys(m.lower() for m in _TOKEN.findall(text)))


@dataclass(frozen=True)
class DistanceConfig:
    """Weights and knobs of the composite message distance.

    The three weights must be non-negative and sum to 1. ``topo_cap`` is
    the hop count at which topological distance saturates; disconnected
    pairs sit at the cap. ``asym_penalty`` > 0 adds a constant when the
    second message is older than the first.
    """

    w_topo: float = 1 / 3
    w_time: float = 1 / 3
    w_text: float = 1 / 3
    topo_cap: int = 6
    asym_penalty: float = 0.0
    text_metric: str = "jaccard"

    def __post_init__(self) -> None:
        if min(self.w_topo, self.w_time, self.w_text) < 0:
            raise ValueError("distance weights must be non-negative")
        if abs(self.w_topo + self.w_time + self.w_text - 1.0) > 1e-9:
            raise ValueError("distance weights must sum to 1")
        if self.topo_cap < 1:
            raise ValueError("topo_cap must be >= 1")
        if self.asym_penalty < 0:
            raise ValueError("asym_penalty must be >= 0")
        if self.text_metric not in TEXT_METRICS:
            raise ValueError(f"text_metric must be one of {TEXT_METRICS}")

    @property
    def symmetric(self) -> bool:
        return self.asym_penalty == 0


@dataclass
class DistanceMatrix:
    ids: list[str]
    d: np.ndarray

    def index(self, mid: str) -> int:
        return self.ids.index(mid)


@dataclass
class ClusterResult:
    labels: dict[str, int]
    medoids: list[str]
    objective: float
    history: list[float]  # objective after BUILD, then after each swap


# -- distance components -----------------------------------------------------

def _adjacency(net: TemporalTextNetwork) -> dict[tuple[str, str], set[tuple[str, str]]]:
    # actor and message namespaces may overlap, hence the typed keys
    adj: dict[tuple[str, str], set[tuple[str, str]]] = {}

    def link(a, b):
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)

    for actor, mid, _ in net.production_edges:
        link(("a", actor), ("m", mid))
    for mid, actor, _ in net.consumption_edges:
        link(("m", mid), ("a", actor))
    return adj


def _bounded_hops(adj, start, cap: int) -> dict:
    hops = {start: 0}
    frontier = [start]
    depth = 0
    while frontier and depth < cap:
        depth += 1
        nxt = []
        for node in frontier:
            for nb in adj.get(node, ()):
                if nb not in hops:
                    hops[nb] = depth
                    nxt.append(nb)
        frontier = nxt
    return hops


def _text_distance(tokens_i: set[str], tokens_j: set[str], metric: str) -> float:
    if not tokens_i and not tokens_j:
        return 0.0
    inter = len(tokens_i & tokens_j)
    if metric == "jaccard":
        union = len(tokens_i | tokens_j)
        return 1.0 - inter / union
    if not tokens_i or not tokens_j:
        return 1.0
    return 1.0 - inter / (len(tokens_i) * len(tokens_j)) ** 0.5


def _time_range(net: TemporalTextNetwork) -> int:
    times = [net.production_time(mid) for mid in net.messages]
    times = [t for t in times if t is not None]
    if len(times) < 2:
        return 0
    return max(times) - min(times)


def _combine(cfg: DistanceConfig, d_topo: float, d_time: float, d_text: float) -> float:
    return cfg.w_topo * d_topo + cfg.w_time * d_time + cfg.w_text * d_text


class _DistanceContext:
    """Shared per-network precomputation for distance evaluations."""

    def __init__(self, net: TemporalTextNetwork, cfg: DistanceConfig, topo: bool = True):
        self.net = net
        self.cfg = cfg
        self.adj = _adjacency(net) if topo and cfg.w_topo > 0 else {}
        self.time_range = _time_range(net)
        self.tokens = {mid: set(tokenize(msg.text)) for mid, msg in net.messages.items()}
        self.times = {mid: net.production_time(mid) for mid in net.messages}

    def hops_row(self, mid: str) -> dict:
        if self.cfg.w_topo <= 0:
            return {}
        return _bounded_hops(self.adj, ("m", mid), self.cfg.topo_cap)

    def distance(self, mi: str, mj: str, hops_from_mi: dict) -> float:
        cfg = self.cfg
        if cfg.w_topo > 0:
            sp = hops_from_mi.get(("m", mj))
            d_topo = 1.0 if sp is None else min(sp, cfg.topo_cap) / cfg.topo_cap
        else:
            d_topo = 0.0
        t_i, t_j = self.times[mi], self.times[mj]
        if self.time_range > 0 and t_i is not None and t_j is not None:
            d_time = abs(t_i - t_j) / self.time_range
        else:
            d_time = 0.0
        d_text = _text_distance(self.tokens[mi], self.tokens[mj], cfg.text_metric)
        d = _combine(cfg, d_topo, d_time, d_text)
        if cfg.asym_penalty > 0 and t_i is not None and t_j is not None and t_j < t_i:
            d += cfg.asym_penalty
        return d


def pairwise_distance(
    net: TemporalTextNetwork, mi: str, mj: str, cfg: DistanceConfig | None = None
) -> float:
    """Composite distance between two messages of the network."""
    cfg = cfg or DistanceConfig()
    for mid in (mi, mj):
        if mid not in net.messages:
            raise UnknownMessage(f"no such message: {mid!r}")
    ctx = _DistanceContext(net, cfg)
    return ctx.distance(mi, mj, ctx.hops_row(mi))


def distance_matrix(
    net: TemporalTextNetwork,
    ids: list[str] | None = None,
    cfg: DistanceConfig | None = None,
) -> DistanceMatrix:
    """All pairwise distances over ``ids`` (default: all messages, sorted).

    Shortest paths are computed once per source message; rows are
    independent, so TTN_THREADS > 1 computes them in parallel with
    identical output.
    """
    cfg = cfg or DistanceConfig()
    if ids is None:
        ids = sorted(net.messages)
    else:
        ids = list(ids)
        for mid in ids:
            if mid not in net.messages:
                raise UnknownMessage(f"no such message: {mid!r}")
    ctx = _DistanceContext(net, cfg)
    n = len(ids)

    def row(i: int) -> list[float]:
        hops = ctx.hops_row(ids[i])
        return [0.0 if i == j else ctx.distance(ids[i], ids[j], hops) for j in range(n)]

    d = np.array(parallel_map(row, list(range(n))), dtype=float).reshape(n, n)
    return DistanceMatrix(ids, d)


def nearest(
    net: TemporalTextNetwork,
    query_tokens,
    query_t: int,
    k: int,
    cfg: DistanceConfig | None = None,
) -> list[tuple[str, float]]:
    """The k messages closest to a (tokens, time) query, ascending.

    A query has no position in the bipartite graph, so the topology weight
    is redistributed proportionally onto the time and text weights. Ties
    break on message id; fewer than k messages returns them all.
    """
    cfg = cfg or DistanceConfig()
    if not net.messages:
        raise EmptyNetwork("cannot query an empty network")
    if k < 1:
        raise ValueError("k must be >= 1")
    rest = cfg.w_time + cfg.w_text
    if rest > 0:
        w_time, w_text = cfg.w_time / rest, cfg.w_text / rest
    else:
        w_time = w_text = 0.5
    query = set(query_tokens)
    ctx = _DistanceContext(net, cfg, topo=False)
    scored = []
    for mid in sorted(net.messages):
        t = ctx.times[mid]
        if ctx.time_range > 0 and t is not None:
            d_time = abs(t - query_t) / ctx.time_range
        else:
            d_time = 0.0
        d_text = _text_distance(query, ctx.tokens[mid], cfg.text_metric)
        d = w_time * d_time + w_text * d_text
        if cfg.asym_penalty > 0 and t is not None and t < query_t:
            d += cfg.asym_penalty
        scored.append((d, mid))
    scored.sort()
    return [(mid, d) for d, mid in scored[: min(k, len(scored))]]


# -- clustering ---------------------------------------------------------------

def cluster_kmedoids(
    dm: DistanceMatrix, k: int, seed: int = 0, max_iter: int = 100
) -> ClusterResult:
    """Partition the matrix ids around k medoids (PAM-style).

    Greedy BUILD initialization followed by best-improvement swaps until
    no swap lowers the total distance-to-medoid objective, or max_iter
    swaps were applied. Ties always break toward the lexicographically
    smaller message id, which also makes the result independent of the
    input id order. The procedure is fully deterministic; ``seed`` is
    accepted for interface stability and reserved for stochastic restarts.
    """
    del seed
    n = len(dm.ids)
    if not 1 <= k <= n:
        raise BadK(f"k must be in [1, {n}], got {k}")
    if not np.array_equal(dm.d, dm.d.T):
        raise AsymmetricMatrix("k-medoids needs a symmetric distance matrix")

    order = sorted(range(n), key=dm.ids.__getitem__)
    ids = [dm.ids[i] for i in order]
    d = dm.d[np.ix_(order, order)]

    # BUILD: first medoid minimizes total distance, then greedy gain
    medoids = [int(np.argmin(d.sum(axis=1)))]
    nearest_d = d[:, medoids[0]].copy()
    while len(medoids) < k:
        best_c, best_gain = -1, -1.0
        for c in range(n):
            if c in medoids:
                continue
            gain = float(np.maximum(nearest_d - d[:, c], 0.0).sum())
            if gain > best_gain:
                best_c, best_gain = c, gain
        medoids.append(best_c)
        nearest_d = np.minimum(nearest_d, d[:, best_c])

    def objective(meds: list[int]) -> float:
        return float(d[:, meds].min(axis=1).sum())

    current = objective(medoids)
    history = [current]
    for _ in range(max_iter):
        best_delta, best_swap = 0.0, None
        for m in sorted(medoids):
            others = [x for x in medoids if x != m]
            for h in range(n):
                if h in medoids:
                    continue
                delta = objective(others + [h]) - current
                if delta < best_delta:
                    best_delta, best_swap = delta, (m, h)
        if best_swap is None or current + best_delta == current:
            break
        m, h = best_swap
        medoids = [x for x in medoids if x != m] + [h]
        current += best_delta
        history.append(current)

    medoids = sorted(medoids)
    assignment = np.argmin(d[:, medoids], axis=1)
    labels = {ids[i]: int(assignment[i]) for i in range(n)}
    return ClusterResult(labels, [ids[m] for m in medoids], objective(medoids), history)


# -- exports ---------------------------------------------------------------

def _fmt(value: float, decimals: int | None) -> str:
    return repr(value) if decimals is None else f"{value:.{decimals}f}"


def distance_csv(dm: DistanceMatrix, decimals: int | None = None) -> str:
    """Matrix as CSV with the ids as header row and column."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["id", *dm.ids])
    for i, mid in enumerate(dm.ids):
        writer.writerow([mid, *(_fmt(float(v), decimals) for v in dm.d[i])])
    return buf.getvalue()


def clusters_csv(result: ClusterResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["message", "cluster"])
    for mid in sorted(result.labels):
        writer.writerow([mid, result.labels[mid]])
    return buf.getvalue()


def neighbors_csv(results: list[tuple[str, float]], decimals: int = 9) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["message", "distance"])
    for mid, dist in results:
        writer.writerow([mid, f"{dist:.{decimals}f}"])
    return buf.getvalue()
