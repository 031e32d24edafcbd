import math
from fractions import Fraction
from itertools import permutations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from treedecay.correlations import truncated
from treedecay.errors import DomainError
from treedecay.lattice import Box
from treedecay.replica import (CyclicAction, ReplicaConfig, SVariableField, apply_cyclic,
                               apply_permutation, from_s_variables, global_invariance_holds,
                               local_symmetry_counterexample, phase_matrix, replica_energy,
                               replica_energy_from_s, s_moment, s_moment_joint, to_s_variables,
                               transform_matrix, truncated_s_moment, verify_representation)
from treedecay.spin import SpinConfig

BOX11 = Box((1, 1))
BOX22 = Box((2, 2))
BOX33 = Box((3, 3))


def rc_of(box, *bits):
    return ReplicaConfig(box, tuple(bits))


def test_s_variable_examples():
    r2 = math.sqrt(2)
    assert np.allclose(to_s_variables(rc_of(BOX11, 0, 0)).values[0], [0, r2])
    assert np.allclose(to_s_variables(rc_of(BOX11, 0, 1)).values[0], [r2, 0])
    assert np.allclose(to_s_variables(rc_of(BOX11, 0, 0, 0)).values[0], [0, 0, math.sqrt(3)])


def test_inverse_examples():
    n = 3
    boundary = SVariableField(BOX11, [[0, 0, math.sqrt(n)]])
    assert from_s_variables(boundary) == rc_of(BOX11, 0, 0, 0)
    assert from_s_variables(SVariableField(BOX11, [[math.sqrt(2), 0]])) == rc_of(BOX11, 0, 1)
    with pytest.raises(DomainError):
        from_s_variables(SVariableField(BOX11, [[0.3, 0.1]]))
    sf = to_s_variables(rc_of(BOX22, 5, 3))
    assert np.allclose(sf[(-1, 0)], [0, math.sqrt(2)])


@given(st.integers(2, 4), st.data())
def test_round_trip(n, data):
    bits = tuple(data.draw(st.integers(0, 2 ** 4 - 1)) for _ in range(n))
    rc = ReplicaConfig(BOX22, bits)
    assert from_s_variables(to_s_variables(rc)) == rc


@pytest.mark.parametrize("n", range(1, 17))
def test_unitary_and_diagonal(n):
    U = transform_matrix(n)
    assert np.max(np.abs(U @ U.conj().T - np.eye(n))) < 1e-12
    # the cyclic shift P maps copy a to a+1; U P U* = D
    P = np.zeros((n, n))
    for a in range(n):
        P[(a + 1) % n, a] = 1
    assert np.max(np.abs(U @ P @ U.conj().T - phase_matrix(n))) < 1e-12


@given(st.integers(2, 5), st.data())
def test_diagonalization_on_configs(n, data):
    bits = tuple(data.draw(st.integers(0, 15)) for _ in range(n))
    rc = ReplicaConfig(BOX22, bits)
    lhs = to_s_variables(apply_cyclic(rc, CyclicAction(1))).values
    rhs = to_s_variables(rc).values @ phase_matrix(n).T
    assert np.max(np.abs(lhs - rhs)) < 1e-12


@given(st.integers(2, 4), st.data())
def test_parseval(n, data):
    rc = ReplicaConfig(BOX22, tuple(data.draw(st.integers(0, 15)) for _ in range(n)))
    sig = rc.spin_array()
    s = to_s_variables(rc).values
    lhs = sig @ sig.T
    rhs = s.conj() @ s.T
    assert np.max(np.abs(lhs - rhs)) < 1e-10


def test_cyclic_examples():
    rc = rc_of(BOX22, 1, 6, 9)
    assert apply_cyclic(rc, CyclicAction(0)) == rc
    out = rc
    for _ in range(3):
        out = apply_cyclic(out, CyclicAction(1, [(0, 1), (1, 1)]))
    assert out == rc
    two = rc_of(BOX22, 0b0001, 0b0000)
    swapped = apply_cyclic(two, CyclicAction(1, [(0, 0)]))
    assert swapped == rc_of(BOX22, 0, 1)
    with pytest.raises(DomainError):
        apply_cyclic(two, CyclicAction(1, [(-1, 0)]))


def test_replica_energy_examples():
    assert replica_energy(ReplicaConfig.ground(BOX33, 3)) == 0
    rc = ReplicaConfig.from_configs([SpinConfig.from_minus(BOX33, [(1, 1)]), SpinConfig(BOX33)])
    assert replica_energy(rc) == 8
    assert replica_energy(apply_cyclic(rc, CyclicAction(1))) == 8


@given(st.integers(1, 4), st.data())
def test_energy_from_s_and_global_invariance(n, data):
    rc = ReplicaConfig(BOX22, tuple(data.draw(st.integers(0, 15)) for _ in range(n)))
    assert abs(replica_energy_from_s(to_s_variables(rc)) - replica_energy(rc)) < 1e-9
    assert global_invariance_holds(rc)


def test_global_invariance_all_permutations():
    rc = rc_of(BOX22, 1, 6, 9, 15)
    e = replica_energy(rc)
    assert all(replica_energy(apply_permutation(rc, p)) == e for p in permutations(range(4)))


def test_s_moment_examples():
    i, j = (0, 0), (1, 1)
    # n=2, gamma=1, k=2 is the truncated pair function
    total, nk = s_moment(BOX22, None, 1, [i, j], 2)
    assert total * Fraction(1, 2) == truncated(BOX22, None, [i, j])
    assert abs(s_moment(BOX22, 0.7, 1, [i], 3)) < 1e-10
    assert abs(s_moment(BOX22, 0.7, 1, [i, j], 4)) < 1e-10
    with pytest.raises(DomainError):
        s_moment(BOX22, 0.7, 0, [i], 2)


@pytest.mark.parametrize("n,beta,sites", [(2, 0.6, [(0, 0), (2, 1)]), (2, 1.3, [(1, 1), (1, 1), (0, 2)])])
def test_factorized_matches_joint(n, beta, sites):
    a = s_moment(BOX33, beta, 1, sites, n)
    b = s_moment_joint(BOX33, beta, 1, sites, n)
    assert abs(a - b) < 1e-12


def test_joint_small_n3():
    sites = [(0, 0), (1, 1), (0, 1)]
    assert abs(s_moment(BOX22, 0.5, 1, sites, 3) - s_moment_joint(BOX22, 0.5, 1, sites, 3)) < 1e-12


@pytest.mark.parametrize("beta", [0.3, 1.0])
def test_representation_n3(beta):
    r = verify_representation(BOX22, beta, 3, [(0, 0), (0, 1), (1, 1)])
    assert r["abs_diff"] < 1e-9
    assert set(r) >= {"lhs", "rhs", "abs_diff", "n", "gamma", "beta", "sites"}


def test_representation_n4_gamma3():
    r = verify_representation(BOX22, 0.8, 4, [(0, 0), (0, 1), (1, 1), (1, 0)], gamma=3)
    assert r["abs_diff"] < 1e-9


def test_representation_exact_n2():
    r = verify_representation(BOX33, 0.5, 2, [(0, 0), (2, 2)])
    assert r["exact_equal"] is True


def test_representation_gcd():
    with pytest.raises(DomainError):
        verify_representation(BOX22, 0.5, 4, [(0, 0)] * 4, gamma=2)
    with pytest.raises(DomainError):
        verify_representation(BOX22, 0.5, 3, [(0, 0)] * 2)


@pytest.mark.parametrize("n", [2, 3])
def test_lemma_first(n):
    sites = [(0, 0), (1, 1), (0, 1)][:n]
    lhs = truncated_s_moment(BOX22, 0.6, 1, sites, n)
    rhs = n ** (-(n - 2) / 2) * truncated(BOX22, 0.6, sites)
    assert abs(lhs - rhs) < 1e-9


def test_counterexample():
    r = local_symmetry_counterexample()
    assert r["drop"] == 16 and r["holds"] and r["involution"]
    r2 = local_symmetry_counterexample(2)
    assert r2["drop"] == 32 and r2["holds"]
