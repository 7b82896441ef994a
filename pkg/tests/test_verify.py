"""Inequality suites: pointwise identities, witnesses, support maps, sweeps."""

from fractions import Fraction

import numpy as np
import pytest

from expandlab import (
    COMPLEX,
    ConfigError,
    DimensionError,
    FieldError,
    GF2,
    ValidationError,
    canonical_basis,
    complete_graph,
    coordinate_subspace,
    coordinate_witness,
    cycle_graph,
    edge_identity_suite,
    graphical_exact_check,
    graphical_tuple,
    haar_unitary_tuple,
    identity_tuple,
    localized_experiment,
    norm_rank_suite,
    pi_expansion_suite,
    pi_support,
    random_tuple,
    rank_chain_suite,
    separation_experiment,
    spectral_dimension_check,
    spectrum_lift_check,
    subspace_from_columns,
    two_vertex_checks,
    witness_suite,
)
from expandlab.rng import spawn_rng


def test_suite_report_passed_flag():
    rep = edge_identity_suite(haar_unitary_tuple(4, 2, seed=0), trials=10)
    assert rep.passed
    assert rep.cases == 10
    assert rep.failures == []
    assert rep.suite == "edge-identity"


def test_edge_identity_suite_rejects_non_stochastic_input():
    rng = spawn_rng(0, "verify-test")
    with pytest.raises(ValidationError):
        edge_identity_suite(random_tuple(COMPLEX, 4, 2, rng), trials=2)


def test_norm_rank_suite_on_unitary_and_stochastic_tuples():
    rep = norm_rank_suite(haar_unitary_tuple(5, 3, seed=1), trials=40)
    assert rep.passed
    assert rep.cases == 120  # one case per matrix per sampled subspace
    rep = norm_rank_suite(graphical_tuple(cycle_graph(4)), trials=30)
    assert rep.passed
    with pytest.raises(FieldError):
        norm_rank_suite(identity_tuple(4, 2, GF2), trials=2)


def test_rank_chain_suite_both_fields():
    assert rank_chain_suite(haar_unitary_tuple(5, 2, seed=2), trials=60).passed
    rng = spawn_rng(1, "verify-test")
    assert rank_chain_suite(random_tuple(GF2, 5, 3, rng), trials=60).passed
    # identity tuple: zero growth, zero ranks; regression for the rank
    # cutoff on pure-roundoff compressions
    assert rank_chain_suite(identity_tuple(6, 2), trials=30).passed


def test_coordinate_witness_on_coordinate_subspaces():
    b = graphical_tuple(cycle_graph(4), GF2)
    w = coordinate_witness(b, coordinate_subspace(GF2, 4, [0, 1]))
    assert w == frozenset({1, 2})  # 1-based vertex labels
    assert coordinate_witness(b, coordinate_subspace(GF2, 4, [1])) == frozenset({2})


def test_coordinate_witness_on_a_mixed_subspace():
    b = graphical_tuple(cycle_graph(4), GF2)
    v = canonical_basis([[1, 1, 0, 0]], GF2)
    assert coordinate_witness(b, v) == frozenset({1})
    with pytest.raises(DimensionError):
        coordinate_witness(b, canonical_basis(np.eye(4)[:3], GF2))


def test_pi_support_worked_values():
    # pi collects, over a flag through the subspace, the last nonzero
    # coordinate of each new direction
    assert pi_support(coordinate_subspace(GF2, 4, [1])) == frozenset({2})
    v = canonical_basis([[1, 1, 0, 0], [0, 1, 1, 0]], GF2)
    assert pi_support(v) == frozenset({2, 3})
    assert pi_support(canonical_basis(np.eye(4), GF2)) == frozenset({1, 2, 3, 4})
    w = subspace_from_columns(np.array([[1.0, 0], [1, 0], [0, 1], [0, 0]]))
    assert pi_support(w) == frozenset({2, 3})
    u = subspace_from_columns(np.eye(5)[:, [0, 3]])
    assert pi_support(u) == frozenset({1, 4})


def test_pi_support_size_equals_dimension():
    from expandlab.core import random_subspace

    rng = spawn_rng(2, "verify-test")
    for fld in (COMPLEX, GF2):
        for r in (1, 2, 3):
            v = random_subspace(fld, 6, r, rng)
            assert len(pi_support(v)) == r


def test_witness_suite_exhaustive_over_gf2():
    b = graphical_tuple(cycle_graph(4), GF2)
    rep = witness_suite(b, exhaustive=True)
    assert rep.passed
    assert rep.cases == 50  # every nonzero subspace of dim <= 2
    # the witness compares rank sums against graph boundaries, so the
    # tuple has to remember its graph
    with pytest.raises(ConfigError):
        witness_suite(haar_unitary_tuple(4, 2, seed=0), exhaustive=True)


def test_witness_suite_sampled_complex():
    b = graphical_tuple(complete_graph(4))
    rep = witness_suite(b, trials=50, seed=0)
    assert rep.passed and rep.cases == 50


def test_pi_expansion_suite():
    assert pi_expansion_suite(cycle_graph(4), GF2, exhaustive=True).passed
    assert pi_expansion_suite(cycle_graph(4), trials=40, seed=1).passed
    assert pi_expansion_suite(complete_graph(4), GF2, exhaustive=True).passed


def test_spectrum_lift_check_worked_and_random():
    rep = spectrum_lift_check(complete_graph(2))
    assert rep.passed and rep.cases == 3
    assert spectrum_lift_check(cycle_graph(6)).passed
    from expandlab import random_regular_graph

    assert spectrum_lift_check(random_regular_graph(8, 3, seed=3)).passed


def test_graphical_exact_check():
    assert graphical_exact_check(cycle_graph(4)).passed
    assert graphical_exact_check(complete_graph(4)).passed
    assert graphical_exact_check(cycle_graph(6), p=3).passed


def test_spectral_dimension_check():
    assert spectral_dimension_check(haar_unitary_tuple(4, 2, seed=5), budget=600).passed
    assert spectral_dimension_check(graphical_tuple(cycle_graph(4)), budget=600).passed


def test_two_vertex_checks():
    rep = two_vertex_checks()
    assert rep.passed
    assert rep.cases == 3


def test_separation_experiment_small():
    out = separation_experiment(n=6, d=2, s_list=(1, 0.1), seed=1, mu_budget=300)
    assert out["all_caps_hold"]
    assert len(out["rows"]) == 2
    row = out["rows"][-1]
    assert row["s"] == 0.1
    assert row["gap"] <= row["gap_cap"] + 1e-9
    assert row["generic_rank_r1"] and row["generic_rank_r2"]
    # shrinking s shrinks the gap
    assert out["rows"][1]["gap"] < out["rows"][0]["gap"]


def test_localized_experiment_small():
    out = localized_experiment(n=8, d=2, eps=0.02, s_list=(0.5, 2))
    assert len(out["rows"]) == 2
    for row in out["rows"]:
        assert row["min_overlap"] >= 1 - 4 * 0.02
        assert row["overlap_ok"] and row["entry_ok"]


def test_failure_records_carry_digests():
    # force a failing suite by checking a wrong bound through the public API:
    # the identity tuple has zero edge objective, so a strictly positive
    # lower bound in spectral_dimension_check must still pass (gap is 0);
    # instead, check the failure plumbing directly
    from expandlab.verify import SuiteReport

    rep = SuiteReport(suite="demo", cases=1, failures=[], seed=0, tolerances={})
    rep.fail({"x": 1}, observed=0.1, bound=0.2, margin=-0.1)
    assert not rep.passed
    entry = rep.failures[0]
    assert set(entry) == {"digest", "observed", "bound", "margin"}
    assert len(entry["digest"]) == 16
