import io
import math

import pytest

from treedecay.errors import DomainError, ResourceError
from treedecay.lattice import Face, face_components
from treedecay.surfaces import (binomial_bound_holds, catalan, census_rows, count_surfaces,
                                count_surfaces_bfs, covering_tree, entropy_bound, iter_surfaces,
                                power_bound_holds, root_face, surface_census, surface_faces,
                                tree_is_covering, write_census_csv)


def test_small_counts():
    assert count_surfaces(2, 1) == 1
    assert count_surfaces(2, 2) == 6
    assert count_surfaces(3, 1) == 1
    assert count_surfaces(3, 2) == 12


def test_ranges():
    with pytest.raises(ResourceError):
        count_surfaces(2, 11)
    with pytest.raises(ResourceError):
        count_surfaces(3, 8)
    with pytest.raises(DomainError):
        count_surfaces(4, 2)
    with pytest.raises(DomainError):
        count_surfaces(2, 0)


@pytest.mark.parametrize("d,r", [(2, 5), (2, 6), (3, 3), (3, 4)])
def test_redelmeier_matches_bfs(d, r):
    assert count_surfaces(d, r) == count_surfaces_bfs(d, r)


@pytest.mark.parametrize("d,r", [(2, 5), (3, 4)])
def test_python_generator_matches_kernel(d, r):
    seen = [s for s in iter_surfaces(d, r)]
    assert len(seen) == len(set(frozenset(s) for s in seen))
    by_size = [sum(1 for s in seen if len(s) == k) for k in range(1, r + 1)]
    assert by_size == surface_census(d, r)[0]


def test_generated_surfaces_are_connected():
    for s in iter_surfaces(2, 5):
        assert len(face_components(surface_faces(s))) == 1
        assert root_face(2) in surface_faces(s)


def test_catalan():
    assert catalan(0) == 1 and catalan(2) == 2 and catalan(5) == 42
    for r in range(1, 101):
        assert catalan(r - 1) <= (2 * math.e) ** r


def test_entropy_bound_values():
    assert float(entropy_bound(2, 1)) == pytest.approx(12 * math.e)
    assert float(entropy_bound(2, 2)) == pytest.approx(1064.024, rel=1e-6)


def test_elementary_inequalities():
    assert all(binomial_bound_holds(v, w) for v in range(1, 201) for w in range(0, v + 1, 7))
    assert all(power_bound_holds(r, d) for d in range(1, 5) for r in range(1, 51))


def test_covering_tree_examples():
    single = [root_face(2)]
    t = covering_tree(single)
    assert len(t) == 1 and t.edges == []
    strip = [Face(0, (0, 0)), Face(0, (0, 1)), Face(0, (0, 2))]
    t = covering_tree(strip, root=strip[0])
    assert len(t.edges) == 2 and tree_is_covering(strip, t)
    # strip is a path: middle face is the only one with two tree neighbours
    degree = {}
    for p, c in t.edges:
        degree[p] = degree.get(p, 0) + 1
        degree[c] = degree.get(c, 0) + 1
    assert sorted(degree.values()) == [1, 1, 2]
    with pytest.raises(DomainError):
        covering_tree([Face(0, (0, 0)), Face(0, (0, 5))])


def test_covering_trees_over_census():
    for s in iter_surfaces(3, 5):
        t = covering_tree(s, root=s[0])
        assert tree_is_covering(s, t) and len(t.edges) == len(s) - 1
    assert surface_census(2, 8, check_trees=True)[1] == 0


def test_census_csv():
    rows = census_rows(2, 4)
    assert [r["N"] for r in rows] == [1, 6, 33, 176]
    buf = io.StringIO()
    write_census_csv(rows, buf)
    assert buf.getvalue().splitlines()[0] == "d,r,N,bound,ratio"
