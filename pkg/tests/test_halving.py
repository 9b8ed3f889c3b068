import pytest

from hypertope.cgroup import CGroup
from hypertope.constructions import build_from_symbol, coxeter_polytope
from hypertope.coxeter import CoxeterDiagram
from hypertope.errors import NotString
from hypertope.halving import (conjugation_symmetry, extended_schlafli, facet_bipartiteness, halve, map_face_vector,
                               rank3_genus, tail_parameter)
from hypertope.permcore import Permutation

SOURCES = ["delta2^{{3}}", "delta2^{{4}}", "delta2^{{5}}", "delta2^{{3,3}}", "delta2^{{4,3}}", "{3,3}", "{4,3}",
           "{3,4}", "{3,5}", "{5,3}", "{3,3,3}", "{4,3,3}", "{4,4}:(4,0)", "{4,3,3}/[0 1 2 3]^4",
           "dual:{4,3,3}/[0 1 2 3]^4", "delta2^{{3,3,3}}"]


def test_tail_parameter():
    assert tail_parameter(3) == 3 and tail_parameter(5) == 5
    assert tail_parameter(4) == 2 and tail_parameter(6) == 3


def test_halve_octahedron_gives_tetrahedron():
    R = halve(build_from_symbol("delta2^{{3}}"))
    assert R.halved_order == 24 and R.index == 2 and R.s == 2
    assert R.diagram == CoxeterDiagram.from_edges(3, {(0, 1): 3, (0, 2): 3})
    # renumbered as the string (rho_1, rho_0, rho_2) it is {3,3}
    assert R.diagram.reindexed([1, 0, 2]) == CoxeterDiagram.string((3, 3))
    assert R.extended_symbol == "{3, 3}"


def test_halve_tetrahedron_index_one():
    R = halve(coxeter_polytope((3, 3)))
    assert R.index == 1 and R.s == 3 and R.halved_order == 24
    assert R.diagram == CoxeterDiagram.from_edges(3, {(0, 1): 3, (0, 2): 3, (1, 2): 3})
    assert not facet_bipartiteness(coxeter_polytope((3, 3)))


def test_halve_delta_5_3():
    R = halve(build_from_symbol("delta2^{{5,3}}"))
    assert R.halved_order == 245760 == 2**11 * 120
    assert R.extended_symbol == "{5, 3^3}"
    assert R.diagram == CoxeterDiagram.from_edges(4, {(0, 1): 5, (1, 2): 3, (1, 3): 3})


@pytest.mark.parametrize("sym", SOURCES)
def test_halving_invariants(sym):
    P = build_from_symbol(sym)
    R = halve(P)
    n = P.rank
    r, h = P.generators, R.halved.generators
    assert h[:n - 1] == r[:n - 1]
    assert h[n - 1] == r[n - 1] * r[n - 2] * r[n - 1]
    assert R.index in (1, 2) and R.index * R.halved_order == P.order()
    p_last = P.schlafli()[-1]
    assert R.s == (p_last if p_last % 2 else p_last // 2)
    assert R.diagram == CoxeterDiagram.tail_triangle(P.schlafli(), R.s)
    assert R.diagram == R.halved.diagram()
    assert (R.index == 2) == facet_bipartiteness(P)
    assert conjugation_symmetry(R)


def test_facet_bipartiteness_examples():
    assert not facet_bipartiteness(coxeter_polytope((4, 3)))
    assert facet_bipartiteness(build_from_symbol("delta2^{{3}}"))


def test_delta_index_law_big():
    R = halve(build_from_symbol("delta2^{{5,3,3}}"))
    assert R.index == 2
    assert R.halved_order == 2**119 * 14400
    assert R.formula is not None and R.formula.value == R.halved_order
    assert R.formula_level


def test_extended_symbols():
    assert halve(build_from_symbol("delta2^{{4,3,3}}")).extended_symbol == "{4, 3, 3^3} : (4,0,0,0)"
    assert halve(build_from_symbol("delta2^{{4}}")).extended_symbol == "{4, 4} : (2,2)"
    R = halve(build_from_symbol("delta2^{{6}}"))
    assert extended_schlafli(R) == "{6, 6}"


def test_rank3_counts_and_genus():
    for p in range(3, 9):
        R = halve(build_from_symbol(f"delta2^{{{{{p}}}}}"))
        fv = map_face_vector(R)
        assert fv == (2**(p - 1), 2**(p - 2) * p, 2**(p - 1))
        assert rank3_genus(fv) == 2**(p - 3) * (p - 4) + 1


def test_rank3_genus_rejects_odd_characteristic():
    with pytest.raises(ValueError):
        rank3_genus((3, 6, 4))


def test_halve_errors():
    with pytest.raises(NotString):
        halve(coxeter_polytope((5,)))
    g = [Permutation.parse(t, 4) for t in ("(1 2)", "(2 3)", "(3 4)")]
    # rho_0 and rho_2 do not commute: not a string diagram
    ring = CGroup([g[0], g[1], Permutation.parse("(1 3)", 4)], 4)
    with pytest.raises(NotString):
        halve(ring)
