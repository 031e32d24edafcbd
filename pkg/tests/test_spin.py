import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, strategies as st

from treedecay.errors import ResourceError
from treedecay.lattice import Box, boundary_faces
from treedecay.polynomial import GibbsPolynomial
from treedecay.spin import (MomentEngine, SpinConfig, bond_counts, energy, enumerate_configs,
                            enumerate_with_bonds, expectation, partition_function)


def test_energy_examples():
    box = Box((5, 5))
    assert energy(SpinConfig(box)) == 0
    assert energy(SpinConfig.from_minus(box, [(2, 2)])) == 8
    assert energy(SpinConfig.from_minus(Box((3, 3, 3)), [(1, 1, 1)])) == 12


def test_partition_function_examples():
    assert partition_function(Box((1, 1))) == GibbsPolynomial([1, 0, 0, 0, 1])
    assert partition_function(Box((0, 0))) == GibbsPolynomial([1])
    for ext in [(2, 2), (2, 3), (3, 3), (2, 2, 2)]:
        assert partition_function(Box(ext))(1) == 2 ** math.prod(ext)


def test_expectation_examples():
    box = Box((1, 1))
    one = expectation(box, None, lambda c: 1, exact=True)
    assert one.num == one.z
    s = expectation(box, None, lambda c: c[(0, 0)], exact=True)
    assert s.num == GibbsPolynomial([1, 0, 0, 0, -1])
    u = math.exp(-2.0)
    assert math.isclose(s.value(1.0), (1 - u ** 4) / (1 + u ** 4), rel_tol=1e-14)
    box = Box((2, 3))
    assert abs(expectation(box, 0.0, lambda c: c[(1, 1)])) < 1e-15


def test_enumeration_counts():
    assert len(list(enumerate_configs(Box((1, 1))))) == 2
    assert len(list(enumerate_configs(Box((1, 2))))) == 4
    bits = [c.bits for c in enumerate_configs(Box((3, 3)))]
    assert len(bits) == 512 and len(set(bits)) == 512


def test_cap_error(monkeypatch):
    with pytest.raises(ResourceError) as e:
        list(enumerate_configs(Box((3, 3)), cap=100))
    assert e.value.required == 512
    monkeypatch.setenv("REPLICA_CAP", "100")
    with pytest.raises(ResourceError):
        bond_counts(Box((3, 3)))


def test_gray_walk_energy_matches_direct():
    box = Box((2, 3))
    b = bond_counts(box)
    for cfg, k in enumerate_with_bonds(box):
        assert energy(cfg) == 2 * k == 2 * b[cfg.bits]


@given(st.integers(0, 2 ** 9 - 1))
def test_energy_is_twice_contour_area(bits):
    cfg = SpinConfig(Box((3, 3)), bits)
    assert energy(cfg) == 2 * len(boundary_faces(cfg.minus_sites()))


@pytest.mark.parametrize("ext", [(2, 2), (2, 3), (3, 2), (3, 3), (4, 3), (2, 2, 2), (1, 3, 2)])
def test_transfer_matches_enumeration(ext):
    box = Box(ext)
    a = MomentEngine(box, "enumerate")
    b = MomentEngine(box, "transfer")
    rng = np.random.default_rng(len(ext) * 10 + ext[0])
    assert a.z == b.z
    for _ in range(10):
        k = rng.integers(1, 4)
        sites = [box.sites[j] for j in rng.integers(0, box.size, size=k)]
        assert a.polynomial(sites) == b.polynomial(sites)


def test_transfer_reaches_six_by_six():
    box = Box((6, 6))
    z = partition_function(box)
    assert z(1) == 2 ** 36
    m = MomentEngine(box).moment([(2, 2)])
    assert 0 < m.value(1.0) < 1


@pytest.mark.parametrize("beta", [0.0, 0.3, 1.0, 4.0, 10.0])
def test_polynomial_and_float_paths_agree(beta):
    box = Box((3, 3))
    f = lambda c: c[(0, 1)] * c[(2, 2)]
    exact = expectation(box, None, f, exact=True).value(beta)
    assert math.isclose(exact, expectation(box, beta, f), rel_tol=1e-12, abs_tol=1e-300)


@pytest.mark.parametrize("beta", [0.0, 0.2, 1.0, 3.0])
def test_magnetization_range(beta):
    box = Box((3, 3))
    for s in box.sites:
        m = MomentEngine(box).moment([s]).value(beta)
        assert -1e-15 <= m <= 1


def test_fraction_observable():
    r = expectation(Box((1, 1)), None, lambda c: Fraction(1, 2), exact=True)
    assert r.value(0.7) == pytest.approx(0.5)
