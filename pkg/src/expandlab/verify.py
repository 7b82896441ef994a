"""Executable inequality suites, witness extractors, and the two
power-sweep experiments.

Each suite draws (or enumerates) subspace cases against a fixed tuple or
graph, checks the relevant identity/inequality pointwise, and returns a
SuiteReport whose failures list is empty exactly when everything held.
Failure entries carry a content digest of the offending case so a rerun
with the same seed pinpoints it.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction

import numpy as np

from .constructions import (
    graphical_tuple,
    haar_unitary_tuple,
    localized_unitary_tuple,
    tuple_power,
    _tuple_logs,
)
from .core import (
    MatrixTuple,
    Subspace,
    make_tuple,
    random_subspace,
    restrict,
    subspace_from_columns,
    validate_doubly_stochastic,
    validate_unitary,
)
from .dimension import (
    _check_subspace,
    _restriction_rank_sum,
    _span_rank,
    dimension_expansion_estimate,
    enumerate_subspaces,
    exact_expansion_finite_field,
    generic_expansion_check,
)
from .errors import ConfigError, InternalError, ValidationError
from .fields import COMPLEX, FieldSpec
from .graph import Graph, complete_graph, edge_expansion, spectral_expansion, vertex_expansion
from .kernels import gf_rcef
from .quantum import (
    _edge_objective,
    cp1_grid_minimum,
    quantum_edge_value,
    quantum_expansion,
    superoperator_matrix,
)
from .rng import spawn_rng
from .serialize import digest

__all__ = [
    "SuiteReport",
    "edge_identity_suite",
    "norm_rank_suite",
    "rank_chain_suite",
    "coordinate_witness",
    "witness_suite",
    "pi_support",
    "pi_expansion_suite",
    "spectrum_lift_check",
    "graphical_exact_check",
    "spectral_dimension_check",
    "two_vertex_checks",
    "separation_experiment",
    "localized_experiment",
]


@dataclass
class SuiteReport:
    """Outcome of one suite run; empty failures means the suite passed."""

    suite: str
    cases: int
    failures: list = dc_field(default_factory=list)
    seed: int | None = None
    tolerances: dict = dc_field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, payload: dict, observed, bound, margin) -> None:
        self.failures.append(
            {
                "digest": digest(payload),
                "observed": observed,
                "bound": bound,
                "margin": margin,
            }
        )


def _sampled_subspaces(b: MatrixTuple, trials: int, seed: int, label: str):
    """trials random subspaces of dimension 1..n/2, matched to the field."""
    if b.n < 2:
        raise ValidationError("suites need n >= 2")
    rng = spawn_rng(seed, label, b.n, b.d)
    for _ in range(trials):
        r = int(rng.integers(1, b.n // 2 + 1))
        yield random_subspace(b.field, b.n, r, rng)


def edge_identity_suite(b: MatrixTuple, trials: int = 100, seed: int = 0) -> SuiteReport:
    """Cross-checks the trace form of the quantum edge objective against
    the restriction-norm form on random subspaces; the two are equal up to
    roundoff for every tuple."""
    if not validate_doubly_stochastic(b):
        raise ValidationError("the edge identity suite expects a doubly stochastic tuple")
    tol = 1e-9 * b.n
    report = SuiteReport(suite="edge-identity", cases=trials, seed=seed, tolerances={"abs": tol})
    for i, v in enumerate(_sampled_subspaces(b, trials, seed, "edge-identity")):
        trace_form = _edge_objective(b.mats, b.d, v.basis)
        norm_form = sum(
            restrict(b.mats[k], v).s2_norm() ** 2 for k in range(b.d)
        ) / (b.d * v.dim)
        gap = abs(trace_form - norm_form)
        if gap > tol:
            report.fail(
                {"suite": report.suite, "seed": seed, "case": i, "subspace": v},
                trace_form,
                norm_form,
                tol - gap,
            )
    return report


def norm_rank_suite(b: MatrixTuple, trials: int = 100, seed: int = 0) -> SuiteReport:
    """Per-matrix restriction bounds: S2^2 <= factor * rank and
    S-infinity <= sqrt(factor), factor 1 for unitary tuples and d for
    doubly stochastic ones."""
    unitary = validate_unitary(b)
    if not unitary and not validate_doubly_stochastic(b):
        raise ValidationError("norm/rank bounds need a doubly stochastic or unitary tuple")
    factor = 1.0 if unitary else float(b.d)
    tol = 1e-9
    report = SuiteReport(
        suite="norm-rank",
        cases=trials * b.d,
        seed=seed,
        tolerances={"abs": tol, "factor": factor},
    )
    for i, v in enumerate(_sampled_subspaces(b, trials, seed, "norm-rank")):
        for k in range(b.d):
            res = restrict(b.mats[k], v)
            s2_sq = res.s2_norm() ** 2
            cap = factor * res.rank()
            payload = {"suite": report.suite, "seed": seed, "case": i, "matrix": k, "subspace": v}
            if s2_sq > cap + tol:
                report.fail(payload, s2_sq, cap, cap + tol - s2_sq)
            s_inf = res.sp_norm(np.inf)
            if s_inf > np.sqrt(factor) + tol:
                report.fail(payload, s_inf, np.sqrt(factor), np.sqrt(factor) + tol - s_inf)
    return report


def rank_chain_suite(b: MatrixTuple, trials: int = 100, seed: int = 0) -> SuiteReport:
    """Sandwiches the subspace growth dim(V+B(V)) - dim V between
    restriction-rank sums: sum_i rank(B_i|) <= d * growth, and the
    identity-augmented tuple gives sum >= growth. Integer-exact on both
    fields (complex ranks are tolerance ranks)."""
    eye = np.eye(b.n, dtype=b.mats.dtype)
    aug = make_tuple(np.concatenate([b.mats, eye[None]]), field=b.field)
    report = SuiteReport(
        suite="rank-chain",
        cases=trials,
        seed=seed,
        tolerances={} if not b.field.is_complex else {"rank_tol": b.field.rank_tol},
    )
    for i, v in enumerate(_sampled_subspaces(b, trials, seed, "rank-chain")):
        growth = _span_rank(b, v.basis) - v.dim
        upper = _restriction_rank_sum(b, v)
        lower = _restriction_rank_sum(aug, v)
        payload = {"suite": report.suite, "seed": seed, "case": i, "subspace": v}
        if upper > b.d * growth:
            report.fail(payload, upper, b.d * growth, b.d * growth - upper)
        if lower < growth:
            report.fail(payload, lower, growth, lower - growth)
    return report


def _graph_from_tuple(b: MatrixTuple) -> Graph:
    if b.meta.get("kind") != "graphical" or "edges" not in b.meta:
        raise ConfigError("this operation needs a tuple built by graphical_tuple")
    return Graph(b.n, tuple(tuple(e) for e in b.meta["edges"]))


def _pivot_rows(basis: np.ndarray, fld: FieldSpec) -> list:
    """Row indices of an invertible r x r row selection of a rank-r basis,
    chosen by greedy column elimination (largest pivot over C, first
    nonzero over GF(p))."""
    n, r = basis.shape
    taken = np.zeros(n, dtype=bool)
    rows = []
    if fld.is_complex:
        work = np.array(basis, dtype=np.complex128)
        for col in range(r):
            mags = np.where(taken, -1.0, np.abs(work[:, col]))
            p_row = int(np.argmax(mags))
            if mags[p_row] <= 1e-12:
                raise InternalError("no usable pivot; basis is rank deficient")
            taken[p_row] = True
            rows.append(p_row)
            others = ~taken
            scale = work[others, col] / work[p_row, col]
            work[others] -= np.outer(scale, work[p_row])
    else:
        p = fld.p
        work = np.mod(np.array(basis, dtype=np.int64), p)
        for col in range(r):
            nz = np.flatnonzero((work[:, col] % p != 0) & ~taken)
            if nz.size == 0:
                raise InternalError("no usable pivot; basis is rank deficient")
            p_row = int(nz[0])
            taken[p_row] = True
            rows.append(p_row)
            inv = pow(int(work[p_row, col]), -1, p)
            others = ~taken
            scale = (work[others, col] * inv) % p
            work[others] = (work[others] - np.outer(scale, work[p_row])) % p
    return rows


def _witness_data(b: MatrixTuple, g: Graph, v: Subspace):
    rows = _pivot_rows(v.basis, b.field)
    w = frozenset(i + 1 for i in rows)
    boundary = sum(1 for u, x in g.edges if (u in w) != (x in w))
    rank_sum = _restriction_rank_sum(b, v)
    return w, rank_sum, boundary


def coordinate_witness(b: MatrixTuple, v: Subspace) -> frozenset:
    """Vertex set W, |W| = dim V, whose edge boundary lower-bounds the
    restriction rank sum of the graphical tuple at V.

    W consists of the rows hosting an invertible row-selection of V's
    basis; a coordinate subspace returns its own support.
    """
    g = _graph_from_tuple(b)
    _check_subspace(b, v)
    w, rank_sum, boundary = _witness_data(b, g, v)
    if rank_sum < boundary:
        raise InternalError(
            f"witness bound violated: rank sum {rank_sum} < boundary {boundary}"
        )
    return w


def witness_suite(
    b: MatrixTuple, trials: int = 200, seed: int = 0, exhaustive: bool = False
) -> SuiteReport:
    """Runs the coordinate-witness extraction over sampled subspaces (or
    every subspace, over a prime field) and records any case where the
    rank sum fell below the witness's edge boundary."""
    g = _graph_from_tuple(b)
    if exhaustive:
        if b.field.is_complex:
            raise ConfigError("exhaustive witness runs need a prime field")
        cases = list(enumerate_subspaces(b.n, b.field.p, b.n // 2))
        seed_used = None
    else:
        cases = list(_sampled_subspaces(b, trials, seed, "witness"))
        seed_used = seed
    report = SuiteReport(suite="witness", cases=len(cases), seed=seed_used)
    for i, v in enumerate(cases):
        w, rank_sum, boundary = _witness_data(b, g, v)
        if rank_sum < boundary:
            report.fail(
                {"suite": report.suite, "seed": seed_used, "case": i, "subspace": v},
                rank_sum,
                boundary,
                rank_sum - boundary,
            )
    return report


def pi_support(v: Subspace) -> frozenset:
    """The set of last-nonzero coordinates achievable by a basis of V with
    distinct last-nonzero positions (1-based); always has size dim V."""
    if v.dim == 0:
        return frozenset()
    if not v.field.is_complex:
        rev = np.ascontiguousarray(v.basis[::-1])
        echelon = gf_rcef(rev, v.field.p)
        tops = [int(np.argmax(echelon[:, j] != 0)) for j in range(echelon.shape[1])]
        return frozenset(v.n - t for t in tops)
    # Complex route: positions where the flag intersection dim jumps.
    from .core import numerical_rank

    out = []
    prev_dim = 0
    eye = np.eye(v.n, dtype=np.complex128)
    for i in range(1, v.n + 1):
        rank_i = numerical_rank(np.hstack([v.basis, eye[:, :i]]), v.field)
        dim_i = v.dim + i - rank_i
        if dim_i > prev_dim:
            out.append(i)
        prev_dim = dim_i
    if len(out) != v.dim:
        raise InternalError(f"flag jump count {len(out)} != dim {v.dim}")
    return frozenset(out)


def pi_expansion_suite(
    g: Graph,
    fld: FieldSpec = COMPLEX,
    trials: int = 100,
    seed: int = 0,
    exhaustive: bool = False,
) -> SuiteReport:
    """Checks the support-growth chain for the graphical tuple:
    |pi(V + B(V))| >= |pi(V) plus its out-neighborhood| >= (1 + mu(G)) |pi(V)|."""
    b = graphical_tuple(g, fld)
    mu_g, _ = vertex_expansion(g)
    if exhaustive:
        if fld.is_complex:
            raise ConfigError("exhaustive pi runs need a prime field")
        cases = list(enumerate_subspaces(g.n, fld.p, g.n // 2))
        seed_used = None
    else:
        cases = list(_sampled_subspaces(b, trials, seed, "pi"))
        seed_used = seed
    report = SuiteReport(suite="pi", cases=len(cases), seed=seed_used)
    for i, v in enumerate(cases):
        piv = pi_support(v)
        grown_cols = np.hstack([v.basis] + [b.mats[k] @ v.basis for k in range(b.d)])
        if not fld.is_complex:
            grown_cols = grown_cols % fld.p
        grown = subspace_from_columns(grown_cols, fld)
        piv_grown = pi_support(grown)
        reach = set(piv)
        for u in piv:
            reach.update(g.neighbors(u))
        payload = {"suite": report.suite, "seed": seed_used, "case": i, "subspace": v}
        if len(piv_grown) < len(reach):
            report.fail(payload, len(piv_grown), len(reach), len(piv_grown) - len(reach))
        needed = (1 + mu_g) * len(piv)
        if Fraction(len(reach)) < needed:
            report.fail(payload, len(reach), needed, Fraction(len(reach)) - needed)
    return report


def spectrum_lift_check(g: Graph) -> SuiteReport:
    """The graphical tuple's channel is the walk matrix on diagonals and
    zero on off-diagonals: its full spectrum is eig(A/d) plus n^2 - n
    zeros, and its traceless gap matches the graph's singular-value
    expansion figure."""
    tol_spec, tol_diag, tol_scalar = 1e-8, 1e-10, 1e-8
    report = SuiteReport(
        suite="spectrum-lift",
        cases=3,
        tolerances={"spectrum": tol_spec, "diagonal": tol_diag, "scalar": tol_scalar},
    )
    b = graphical_tuple(g, COMPLEX)
    deg = g.regular_degree()
    walk = g.adjacency_matrix() / deg
    n = g.n

    m = superoperator_matrix(b).matrix
    eig_m = np.linalg.eigvals(m)
    expected = np.concatenate([np.linalg.eigvalsh(walk), np.zeros(n * n - n)])
    got = np.sort_complex(eig_m)
    want = np.sort_complex(expected.astype(np.complex128))
    spec_err = float(np.max(np.abs(got - want)))
    if spec_err > tol_spec:
        report.fail({"suite": report.suite, "check": "spectrum", "graph": g}, spec_err, tol_spec, tol_spec - spec_err)

    lifted = np.empty((n, n))
    for j in range(n):
        e_jj = np.zeros((n, n), dtype=np.complex128)
        e_jj[j, j] = 1.0
        out = np.einsum("iab,bc,idc->ad", b.mats, e_jj, b.mats.conj()) / b.d
        lifted[:, j] = np.real(np.diagonal(out))
    diag_err = float(np.max(np.abs(lifted - walk)))
    if diag_err > tol_diag:
        report.fail({"suite": report.suite, "check": "diagonal", "graph": g}, diag_err, tol_diag, tol_diag - diag_err)

    scalar_graph = spectral_expansion(g)["lambda_sv"]
    scalar_tuple = quantum_expansion(b).gap
    scalar_err = abs(scalar_graph - scalar_tuple)
    if scalar_err > tol_scalar:
        report.fail({"suite": report.suite, "check": "scalar", "graph": g}, scalar_tuple, scalar_graph, tol_scalar - scalar_err)
    return report


def graphical_exact_check(g: Graph, p: int = 2) -> SuiteReport:
    """Exact rational agreement between graph expansion and the graphical
    tuple's dimension expansion over GF(p): mu matches mu(G), and the
    degree-normalized edge figure matches h(G)."""
    from .fields import prime_field

    b = graphical_tuple(g, prime_field(p))
    deg = g.regular_degree()
    rep = exact_expansion_finite_field(b, normalization=deg)
    mu_g, _ = vertex_expansion(g)
    h_g, _ = edge_expansion(g)
    report = SuiteReport(suite="graphical-exact", cases=2)
    if rep.mu != mu_g:
        report.fail({"suite": report.suite, "check": "mu", "graph": g, "p": p}, rep.mu, mu_g, None)
    if rep.h_d != h_g:
        report.fail({"suite": report.suite, "check": "h", "graph": g, "p": p}, rep.h_d, h_g, None)
    return report


def spectral_dimension_check(b: MatrixTuple, budget: int = 20000, seed: int = 0) -> SuiteReport:
    """Every quantum expander is a dimension expander: gap/(2d) (gap/2 for
    unitary tuples) cannot exceed the searched mu upper bound."""
    gap = max(quantum_expansion(b).gap, 0.0)
    bound = gap / 2 if validate_unitary(b) else gap / (2 * b.d)
    est = dimension_expansion_estimate(b, budget=budget, seed=seed)
    tol = 1e-9
    report = SuiteReport(
        suite="spectral-dimension", cases=1, seed=seed, tolerances={"abs": tol}
    )
    if bound > est.best_value + tol:
        report.fail(
            {"suite": report.suite, "seed": seed, "gap": gap},
            est.best_value,
            bound,
            est.best_value + tol - bound,
        )
    return report


def two_vertex_checks() -> SuiteReport:
    """The two-vertex worked example: the graph expands perfectly (h = 1)
    while its graphical tuple's quantum edge objective sits at 1/2, both
    at the explicit uniform-vector witness and as the global grid minimum."""
    tol_value, tol_grid = 1e-10, 1e-3
    report = SuiteReport(
        suite="two-vertex", cases=3, tolerances={"value": tol_value, "grid": tol_grid}
    )
    g = complete_graph(2)
    h_g, _ = edge_expansion(g)
    if h_g != Fraction(1):
        report.fail({"suite": report.suite, "check": "graph-h"}, h_g, Fraction(1), None)
    b = graphical_tuple(g)
    uniform = subspace_from_columns(np.array([[1.0], [1.0]]) / np.sqrt(2))
    val = quantum_edge_value(b, uniform)
    if abs(val - 0.5) > tol_value:
        report.fail({"suite": report.suite, "check": "uniform-value"}, val, 0.5, tol_value - abs(val - 0.5))
    grid_val, _ = cp1_grid_minimum(b, steps=200)
    if abs(grid_val - 0.5) > tol_grid:
        report.fail({"suite": report.suite, "check": "grid"}, grid_val, 0.5, tol_grid - abs(grid_val - 0.5))
    return report


def separation_experiment(
    n: int = 8,
    d: int = 3,
    s_list: tuple = (1, 0.3, 0.1, 0.03, 0.01, 0.003),
    seed: int = 0,
    mu_budget: int = 2000,
) -> dict:
    """Sweeps fractional powers of a Haar tuple: the quantum gap collapses
    as s shrinks (it is capped by twice the mean distance of U_i^s from
    the identity) while random subspaces keep expanding at full generic
    rank, so no comparable dimension-expansion collapse shows up."""
    base = haar_unitary_tuple(n, d, seed)
    logs = _tuple_logs(base)
    max_phase = max(float(np.max(np.abs(log.eigenphases))) for log in logs)
    rows = []
    for s in s_list:
        s = float(s)
        powered = tuple_power(base, s)
        gap = quantum_expansion(powered).gap
        dists = [float(np.linalg.norm(np.eye(n) - powered.mats[i])) for i in range(d)]
        gap_cap = 2 * float(np.mean(dists))
        est = dimension_expansion_estimate(powered, budget=mu_budget, seed=seed)
        rows.append(
            {
                "s": s,
                "gap": gap,
                "max_dist": max(dists),
                "mean_dist": float(np.mean(dists)),
                "gap_cap": gap_cap,
                "cap_holds": bool(gap <= gap_cap + 1e-9),
                "generic_rank_r1": generic_expansion_check(powered, 1, seed=seed),
                "generic_rank_r2": generic_expansion_check(powered, 2, seed=seed),
                "mu_upper": est.best_value,
                "s_max_phase": s * max_phase,
            }
        )
    return {
        "experiment": "separation",
        "n": n,
        "d": d,
        "seed": seed,
        "mu_budget": mu_budget,
        "rows": rows,
        "all_caps_hold": all(row["cap_holds"] for row in rows),
    }


def localized_experiment(
    n: int = 16,
    d: int = 4,
    eps: float = 0.01,
    s_list: tuple = (0.1, 0.5, 1, 2, 10),
    seed: int = 0,
) -> dict:
    """Power sweep of a localized tuple: e_1 stays nearly fixed under every
    fractional power, so the rank-one projector onto it certifies a small
    quantum gap at every s."""
    base = localized_unitary_tuple(n, d, eps, seed)
    gap_cap = 10 * eps + 2 / n
    overlap_floor = 1 - 4 * eps
    entry_floor = 1 - 8 * eps
    proj = np.zeros((n, n), dtype=np.complex128)
    proj[0, 0] = 1.0
    rows = []
    for s in s_list:
        s = float(s)
        powered = tuple_power(base, s)
        overlaps = [float(np.abs(powered.mats[i][0, 0])) for i in range(d)]
        entries = [
            float(np.real((powered.mats[i] @ proj @ powered.mats[i].conj().T)[0, 0]))
            for i in range(d)
        ]
        gap = quantum_expansion(powered).gap
        rows.append(
            {
                "s": s,
                "min_overlap": min(overlaps),
                "overlap_ok": bool(min(overlaps) >= overlap_floor),
                "min_projected_entry": min(entries),
                "entry_ok": bool(min(entries) >= entry_floor),
                "gap": gap,
                "gap_ok": bool(gap <= gap_cap),
            }
        )
    return {
        "experiment": "localized",
        "n": n,
        "d": d,
        "eps": eps,
        "seed": seed,
        "gap_cap": gap_cap,
        "overlap_floor": overlap_floor,
        "entry_floor": entry_floor,
        "rows": rows,
        "all_ok": all(r["overlap_ok"] and r["entry_ok"] and r["gap_ok"] for r in rows),
    }
