"""Quantum expansion and edge objectives, anchored on two-vertex worked values."""

import numpy as np
import pytest

from expandlab import (
    ConfigError,
    DimensionError,
    FieldError,
    SizeLimitError,
    ValidationError,
    ZeroSubspaceError,
    apply_adjoint_channel,
    apply_channel,
    complete_graph,
    cp1_grid_minimum,
    cycle_graph,
    graphical_tuple,
    haar_unitary_tuple,
    make_tuple,
    quantum_edge_bracket,
    quantum_edge_value,
    quantum_expansion,
    random_tuple,
    schatten_edge_bracket,
    schatten_edge_value,
    spectral_expansion,
    subspace_from_columns,
    superoperator_matrix,
    traceless_frame,
)
from expandlab.core import random_subspace
from expandlab.fields import GF2
from expandlab.quantum import _edge_gradient, _edge_objective
from expandlab.rng import spawn_rng


def _vec(x):
    return x.reshape(-1, order="F")


def test_two_vertex_tuple_worked_values():
    b = graphical_tuple(complete_graph(2))
    assert np.allclose(b.mats[0], np.sqrt(2) * np.array([[0, 1], [0, 0]]))
    assert np.allclose(b.mats[1], np.sqrt(2) * np.array([[0, 0], [1, 0]]))
    rep = quantum_expansion(b)
    assert abs(rep.gap) < 1e-12
    assert abs(rep.lambda2_sv - 1.0) < 1e-12
    assert np.allclose(sorted(rep.spectrum), [0.0, 1.0, 1.0, 2.0], atol=1e-12)

    v = subspace_from_columns(np.array([[1.0], [1.0]]) / np.sqrt(2))
    assert abs(quantum_edge_value(b, v) - 0.5) < 1e-10

    value, vec = cp1_grid_minimum(b)
    assert abs(value - 0.5) < 1e-3
    assert abs(np.linalg.norm(vec) - 1.0) < 1e-12


def test_traceless_frame_is_an_orthonormal_complement():
    for n in (2, 3, 5):
        c = traceless_frame(n)
        assert c.shape == (n * n, n * n - 1)
        assert np.allclose(c.T @ c, np.eye(n * n - 1), atol=1e-12)
        u = np.eye(n).reshape(-1, order="F") / np.sqrt(n)
        assert np.max(np.abs(u @ c)) < 1e-12


def test_superoperator_matches_channel():
    b = haar_unitary_tuple(3, 2, seed=9)
    m = superoperator_matrix(b)
    assert m.convention == "column-stacking"
    rng = spawn_rng(0, "quantum-test")
    x = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    assert np.allclose(m.matrix @ _vec(x), _vec(apply_channel(b, x)), atol=1e-10)
    # adjoint pairing <Y, channel(X)> == <adjoint(Y), X>
    y = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    lhs = np.vdot(y, apply_channel(b, x))
    rhs = np.vdot(apply_adjoint_channel(b, y), x)
    assert abs(lhs - rhs) < 1e-10
    with pytest.raises(SizeLimitError):
        superoperator_matrix(b, max_n=2)


def test_quantum_expansion_of_graphical_tuples_matches_graph_spectra():
    for g in (cycle_graph(4), complete_graph(4), cycle_graph(6)):
        rep = quantum_expansion(graphical_tuple(g))
        assert abs(rep.gap - spectral_expansion(g)["lambda_sv"]) < 1e-8


def test_quantum_expansion_input_checks():
    rng = spawn_rng(1, "quantum-test")
    with pytest.raises(ValidationError):
        quantum_expansion(random_tuple(__import__("expandlab").COMPLEX, 3, 2, rng))
    with pytest.raises(FieldError):
        quantum_expansion(random_tuple(GF2, 3, 2, rng))


def test_edge_value_input_checks():
    b = haar_unitary_tuple(4, 2, seed=0)
    rng = spawn_rng(2, "quantum-test")
    with pytest.raises(ZeroSubspaceError):
        quantum_edge_value(b, random_subspace(b.field, 4, 0, rng))
    with pytest.raises(DimensionError):
        quantum_edge_value(b, random_subspace(b.field, 4, 3, rng))
    with pytest.raises(FieldError):
        quantum_edge_value(b, random_subspace(GF2, 4, 1, rng))


def test_edge_value_against_projector_formula():
    # direct <I - P, channel(P)> / dim V with dense projectors
    b = haar_unitary_tuple(5, 3, seed=3)
    rng = spawn_rng(3, "quantum-test")
    for r in (1, 2):
        v = random_subspace(b.field, 5, r, rng)
        p = v.projector()
        direct = np.vdot(np.eye(5) - p, apply_channel(b, p)).real / r
        assert abs(quantum_edge_value(b, v) - direct) < 1e-9


def test_edge_gradient_matches_finite_differences():
    b = haar_unitary_tuple(4, 2, seed=5)
    rng = spawn_rng(4, "quantum-test")
    t = np.linalg.qr(rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2)))[0]
    adjoint_identity = np.einsum("iba,ibc->ac", b.mats.conj(), b.mats) / b.d
    grad = _edge_gradient(b, t, adjoint_identity)
    for _ in range(4):
        delta = rng.standard_normal((4, 2)) + 1j * rng.standard_normal((4, 2))
        eps = 1e-6
        plus = _edge_objective(b.mats, b.d, t + eps * delta)
        minus = _edge_objective(b.mats, b.d, t - eps * delta)
        fd = (plus - minus) / (2 * eps)
        analytic = float(np.sum(grad.conj() * delta).real)
        assert abs(fd - analytic) < 1e-5 * max(1.0, abs(fd))


def test_schatten_two_recovers_the_quantum_objective():
    b = haar_unitary_tuple(6, 2, seed=7)
    rng = spawn_rng(5, "quantum-test")
    for r in (1, 2, 3):
        v = random_subspace(b.field, 6, r, rng)
        assert abs(schatten_edge_value(b, v, 2) - quantum_edge_value(b, v)) < 1e-10
    with pytest.raises(ConfigError):
        schatten_edge_value(b, v, 0.5)


def test_edge_bracket_invariants():
    b = haar_unitary_tuple(4, 3, seed=11)
    est = quantum_edge_bracket(b, budget=3000, seed=0)
    assert est.lower_bound <= est.best_value + 1e-9
    assert abs(quantum_edge_value(b, est.witness) - est.best_value) < 1e-9
    again = quantum_edge_bracket(b, budget=3000, seed=0)
    assert again.best_value == est.best_value
    assert np.array_equal(again.witness.basis, est.witness.basis)
    # with enough budget, independent seeds land in the same basin
    full = quantum_edge_bracket(b, budget=12000, seed=0)
    other = quantum_edge_bracket(b, budget=12000, seed=1)
    assert abs(other.best_value - full.best_value) < 1e-6


def test_complete_graph_edge_brackets_find_the_capped_minimum():
    # the true minimum over dim <= n/2 subspaces sits at ceil(n/2)/n
    for n, expect in ((3, 2 / 3), (4, 1 / 2)):
        b = graphical_tuple(complete_graph(n))
        est = quantum_edge_bracket(b, budget=6000, seed=0)
        assert abs(est.best_value - expect) < 1e-6


def test_schatten_bracket_determinism():
    b = haar_unitary_tuple(4, 2, seed=13)
    a = schatten_edge_bracket(b, 3.0, budget=2000, seed=2)
    c = schatten_edge_bracket(b, 3.0, budget=2000, seed=2)
    assert a.best_value == c.best_value
    assert a.lower_bound is None  # no certified bound away from p = 2
    two = schatten_edge_bracket(b, 2.0, budget=2000, seed=2)
    assert two.best_value == quantum_edge_bracket(b, budget=2000, seed=2).best_value


def test_symmetrized_gap_cheeger_sandwich_on_qubit_tuples():
    # additive-symmetrization eigenvalue gap: both Cheeger sides hold for
    # every 2x2 tuple, including strongly non-normal channels where the
    # operator-norm gap can exceed the edge objective
    frame = traceless_frame(2)
    for k in range(30):
        b = haar_unitary_tuple(2, 3, seed=1000 + k)
        h_q, _ = cp1_grid_minimum(b)
        m = superoperator_matrix(b).matrix
        compressed = frame.conj().T @ m @ frame
        sym_gap = 1.0 - float(
            np.linalg.eigvalsh((compressed + compressed.conj().T) / 2)[-1]
        )
        assert sym_gap / 2 - 1e-6 <= h_q <= np.sqrt(2 * sym_gap) + 1e-6
        # the operator-norm gap never exceeds the symmetrized gap
        assert quantum_expansion(b).gap <= sym_gap + 1e-9
