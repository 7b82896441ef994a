"""Finite graphs and their expansion parameters.

Vertices are 1-based (matching the text file format); edges are unordered
pairs without loops or multiplicity. Edge and vertex expansion are computed
exactly, as Fractions, by exhaustive subset scan with a minimizing witness;
the scan is capped at 20 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import networkx as nx
import numpy as np

from . import kernels
from .errors import (
    RegularityError,
    ShapeError,
    SizeLimitError,
    UnsupportedError,
    ValidationError,
)
from .fields import COMPLEX, FieldSpec
from .core import MatrixTuple

__all__ = [
    "Graph",
    "cycle_graph",
    "complete_graph",
    "random_regular_graph",
    "edge_expansion",
    "vertex_expansion",
    "spectral_expansion",
    "expansion_report",
    "expansion_relations_check",
    "graph_to_permutation_tuple",
]

SUBSET_SCAN_LIMIT = 20


@dataclass(frozen=True)
class Graph:
    """A simple undirected graph on vertices 1..n."""

    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ShapeError("a graph needs at least one vertex")
        seen = set()
        norm = []
        for u, v in self.edges:
            u, v = int(u), int(v)
            if u == v:
                raise ValidationError(f"loop at vertex {u}")
            if not (1 <= u <= self.n and 1 <= v <= self.n):
                raise ValidationError(f"edge ({u},{v}) outside 1..{self.n}")
            key = (min(u, v), max(u, v))
            if key in seen:
                raise ValidationError(f"duplicate edge {key}")
            seen.add(key)
            norm.append(key)
        object.__setattr__(self, "edges", tuple(sorted(norm)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def degrees(self) -> np.ndarray:
        deg = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            deg[u - 1] += 1
            deg[v - 1] += 1
        return deg

    def regular_degree(self) -> int:
        deg = self.degrees()
        if self.n > 0 and not np.all(deg == deg[0]):
            raise RegularityError(f"graph is not regular: degrees {sorted(set(deg.tolist()))}")
        return int(deg[0]) if self.n else 0

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n))
        for u, v in self.edges:
            a[u - 1, v - 1] = 1.0
            a[v - 1, u - 1] = 1.0
        return a

    def neighbors(self, u: int) -> tuple[int, ...]:
        out = [b if a == u else a for a, b in self.edges if u in (a, b)]
        return tuple(sorted(out))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ShapeError("cycles need at least 3 vertices")
    return Graph(n, tuple((i, i % n + 1) for i in range(1, n + 1)))


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(1, n)))


def random_regular_graph(n: int, d: int, seed: int = 0) -> Graph:
    """A uniformly-ish random connected d-regular graph (resamples until
    connected, which at desk scale takes a couple of tries at most)."""
    if not 0 <= d < n:
        raise ValidationError(f"degree {d} impossible on {n} vertices")
    if n * d % 2 != 0:
        raise ValidationError(f"no {d}-regular graph on {n} vertices: n*d is odd")
    for attempt in range(200):
        g = nx.random_regular_graph(d, n, seed=seed * 1000 + attempt)
        if nx.is_connected(g):
            return Graph(n, tuple((u + 1, v + 1) for u, v in g.edges()))
    raise ValidationError(f"no connected {d}-regular graph on {n} vertices found")


def _edge_arrays(g: Graph) -> tuple[np.ndarray, np.ndarray]:
    if g.m == 0:
        return np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
    eu = np.asarray([u - 1 for u, v in g.edges], dtype=np.int64)
    ev = np.asarray([v - 1 for u, v in g.edges], dtype=np.int64)
    return eu, ev


def _mask_to_vertices(mask: int) -> tuple[int, ...]:
    out = []
    v = 1
    while mask:
        if mask & 1:
            out.append(v)
        mask >>= 1
        v += 1
    return tuple(out)


def _scan(g: Graph, mode: int) -> tuple[int, int, tuple[int, ...]]:
    if g.n > SUBSET_SCAN_LIMIT:
        raise SizeLimitError(f"subset scan capped at {SUBSET_SCAN_LIMIT} vertices, got {g.n}")
    if g.n < 2:
        raise ShapeError("expansion needs at least 2 vertices")
    eu, ev = _edge_arrays(g)
    num, den, mask = kernels.graph_best_subset(g.n, eu, ev, mode)
    return int(num), int(den), _mask_to_vertices(int(mask))


def edge_expansion(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """Exact h(G) = min |boundary(W)| / (d |W|) over 1 <= |W| <= n/2, for a
    d-regular graph, with the minimizing vertex set."""
    d = g.regular_degree()
    if d == 0:
        raise RegularityError("edge expansion needs degree >= 1")
    num, den, witness = _scan(g, 0)
    return Fraction(num, d * den), witness


def vertex_expansion(g: Graph) -> tuple[Fraction, tuple[int, ...]]:
    """Exact vertex expansion min |outer boundary(W)| / |W| over
    1 <= |W| <= n/2, with the minimizing vertex set."""
    num, den, witness = _scan(g, 1)
    return Fraction(num, den), witness


def spectral_expansion(g: Graph) -> dict:
    """Spectral gaps of a d-regular graph under both conventions.

    lambda_eig: second-smallest eigenvalue of I - A/d.
    lambda_sv: 1 - (second-largest singular value of A/d); differs from
    lambda_eig when large negative adjacency eigenvalues exist (bipartite
    components drive it to 0).
    """
    d = g.regular_degree()
    if d == 0:
        raise RegularityError("spectral expansion needs degree >= 1")
    walk = g.adjacency_matrix() / d
    lap_eigs = np.sort(np.linalg.eigvalsh(np.eye(g.n) - walk))
    sv = np.sort(np.linalg.svd(walk, compute_uv=False))[::-1]
    return {
        "lambda_eig": float(lap_eigs[1]) if g.n > 1 else 0.0,
        "lambda_sv": float(1.0 - sv[1]) if g.n > 1 else 0.0,
    }


def expansion_report(g: Graph) -> dict:
    """All expansion parameters of a regular graph in one report."""
    h, h_wit = edge_expansion(g)
    mu, mu_wit = vertex_expansion(g)
    spectral = spectral_expansion(g)
    return {
        "n": g.n,
        "degree": g.regular_degree(),
        "edge_expansion": h,
        "edge_witness": h_wit,
        "vertex_expansion": mu,
        "vertex_witness": mu_wit,
        "lambda_eig": spectral["lambda_eig"],
        "lambda_sv": spectral["lambda_sv"],
    }


def expansion_relations_check(g: Graph, tol: float = 1e-9) -> dict:
    """Check the classical web between h, mu and the spectral gap on one
    graph: mu/d <= h <= mu and lambda_eig/2 <= h <= sqrt(2 lambda_eig)."""
    rep = expansion_report(g)
    h = float(rep["edge_expansion"])
    mu = float(rep["vertex_expansion"])
    lam = rep["lambda_eig"]
    d = rep["degree"]
    checks = {
        "mu_over_d_le_h": mu / d <= h + tol,
        "h_le_mu": h <= mu + tol,
        "half_lambda_le_h": lam / 2 <= h + tol,
        "h_le_sqrt_2lambda": h <= np.sqrt(2 * lam) + tol,
    }
    return {"report": rep, "checks": checks, "passed": all(checks.values())}


def _orient_eulerian(g: Graph) -> list[tuple[int, int]]:
    """Orient every edge along an eulerian circuit of its component; with
    even degrees each vertex gets out-degree d/2."""
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges)
    arcs: list[tuple[int, int]] = []
    for comp in nx.connected_components(h):
        sub = h.subgraph(comp)
        if sub.number_of_edges() == 0:
            continue
        arcs.extend(nx.eulerian_circuit(sub))
    return arcs


def _matchings_from_arcs(n: int, arcs: list[tuple[int, int]], k: int) -> list[dict[int, int]]:
    """Split a k-out-regular arc set into k permutations (source -> target)
    by repeated perfect matchings on the bipartite source/target graph."""
    remaining = set(arcs)
    perms: list[dict[int, int]] = []
    for _ in range(k):
        bip = nx.Graph()
        bip.add_nodes_from((("s", v) for v in range(1, n + 1)), bipartite=0)
        bip.add_nodes_from((("t", v) for v in range(1, n + 1)), bipartite=1)
        for u, v in remaining:
            bip.add_edge(("s", u), ("t", v))
        match = nx.bipartite.maximum_matching(bip, top_nodes=[("s", v) for v in range(1, n + 1)])
        perm = {}
        for key, val in match.items():
            if key[0] == "s":
                perm[key[1]] = val[1]
        if len(perm) != n:
            raise ValidationError("arc set did not split into perfect matchings")
        perms.append(perm)
        remaining -= {(u, v) for u, v in remaining if perm[u] == v}
    if remaining:
        raise ValidationError("arcs left over after matching decomposition")
    return perms


def graph_to_permutation_tuple(g: Graph, permutations=None) -> MatrixTuple:
    """Write the adjacency matrix of a d-regular graph as a sum of d
    permutation matrices and return them as a doubly stochastic tuple.

    For even d the decomposition is computed (eulerian orientation plus
    matching splits). For odd d one must supply ``permutations``: a list of
    d maps (length-n sequences, 1-based targets) whose matrices sum to A.
    """
    d = g.regular_degree()
    if d == 0:
        raise RegularityError("needs a regular graph of degree >= 1")
    a = g.adjacency_matrix()
    if permutations is not None:
        mats = []
        for perm in permutations:
            perm = [int(x) for x in perm]
            if sorted(perm) != list(range(1, g.n + 1)):
                raise ValidationError(f"not a permutation of 1..{g.n}: {perm}")
            m = np.zeros((g.n, g.n))
            for u, v in enumerate(perm, start=1):
                m[v - 1, u - 1] = 1.0
            mats.append(m)
        if len(mats) != d:
            raise ValidationError(f"need exactly {d} permutations, got {len(mats)}")
        total = np.sum(mats, axis=0)
        if not np.array_equal(total, a):
            raise ValidationError("supplied permutation matrices do not sum to A")
    else:
        if d % 2 != 0:
            raise UnsupportedError(
                f"odd degree {d}: supply an explicit permutation decomposition"
            )
        arcs = _orient_eulerian(g)
        half = [dict(p) for p in _matchings_from_arcs(g.n, arcs, d // 2)]
        mats = []
        for perm in half:
            m = np.zeros((g.n, g.n))
            for u, v in perm.items():
                m[v - 1, u - 1] = 1.0
            mats.append(m)
            mats.append(m.T.copy())
        total = np.sum(mats, axis=0)
        if not np.array_equal(total, a):
            raise ValidationError("internal decomposition failed to sum to A")
    meta = {"kind": "permutation", "degree": d, "n": g.n}
    return MatrixTuple(field=COMPLEX, n=g.n, mats=np.asarray(mats), meta=meta)
