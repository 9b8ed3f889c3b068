from itertools import combinations

import pytest

from hypertope.caps import Caps
from hypertope.cgroup import CGroup
from hypertope.constructions import build_from_symbol, coxeter_polytope
from hypertope.errors import CapExceeded, NotAFlag
from hypertope.geometry import (IncidenceSystem, chamber_transitive, cosets_intersect, count_chambers, is_connected,
                                is_geometry, is_residually_connected, is_thin, iter_chambers,
                                locally_spherical_report, residue, tits_coset_geometry, verify_regular_hypertope)
from hypertope.halving import halve
from hypertope.permcore import coset_action


def halved(sym):
    return halve(build_from_symbol(sym)).halved


def system_from_pairs(counts, pairs):
    """``pairs`` maps (i, j) with i < j to a list of incident (a, b)."""
    n = len(counts)
    nbr = [[None if i == j else [0] * counts[i] for j in range(n)] for i in range(n)]
    for (i, j), plist in pairs.items():
        for a, b in plist:
            nbr[i][j][a] |= 1 << b
            nbr[j][i][b] |= 1 << a
    return IncidenceSystem(counts, nbr)


def brute_maximal_cliques(S):
    elems = [(t, e) for t in range(S.rank) for e in range(S.counts[t])]
    cliques = []
    for k in range(1, S.rank + 1):
        for combo in combinations(elems, k):
            if S.is_flag(combo):
                cliques.append(frozenset(combo))
    maximal = [c for c in cliques if not any(c < d for d in cliques)]
    return maximal


# --- polygons and the tetrahedron ----------------------------------------

@pytest.mark.parametrize("p", [3, 5, 6])
def test_polygon_system(p):
    C = coxeter_polytope((p,))
    S = tits_coset_geometry(C)
    assert S.counts == [p, p]
    # incidence graph is a single 2p-cycle
    assert all(len(list(S.incidence_pairs(0, 1))) == 2 * p for _ in [0])
    assert all(bin(m).count("1") == 2 for m in S.nbr[0][1])
    assert is_connected(S)
    assert is_geometry(S).passed
    assert count_chambers(S, 1000) == 2 * p
    assert chamber_transitive(S).passed
    assert is_thin(S).passed
    assert is_residually_connected(S).passed


def test_tetrahedron_system_against_brute_force():
    H = halved("delta2^{{3}}")
    S = tits_coset_geometry(H)
    assert sorted(S.counts) == [4, 4, 6]
    maximal = brute_maximal_cliques(S)
    assert all(len(c) == 3 for c in maximal)
    assert len(maximal) == 24 == count_chambers(S, 1000)
    assert is_geometry(S).passed
    assert is_thin(S, transitive=False).passed
    assert is_residually_connected(S, transitive=False).passed


def test_element_counts_are_indices():
    for sym in ["delta2^{{3,3}}", "delta2^{{4,3}}"]:
        H = halved(sym)
        S = tits_coset_geometry(H)
        for i in range(H.rank):
            assert S.counts[i] == H.order() // H.parabolic(j for j in range(H.rank) if j != i).order()


def test_incidence_agrees_with_sift_oracle():
    for sym in ["delta2^{{3}}", "delta2^{{3,3}}"]:
        H = halved(sym)
        S = tits_coset_geometry(H)
        n = H.rank
        reps = [coset_action(H.group, H.parabolic(j for j in range(n) if j != i)).representatives for i in range(n)]
        for i, j in combinations(range(n), 2):
            for a, ga in enumerate(reps[i]):
                for b, gb in enumerate(reps[j]):
                    assert S.incident((i, a), (j, b)) == cosets_intersect(H, i, ga, j, gb)
                    assert cosets_intersect(H, i, ga, j, gb) == cosets_intersect(H, j, gb, i, ga)


def test_incidence_symmetry_checked_at_build():
    nbr = [[None, [1]], [[0], None]]
    with pytest.raises(ValueError):
        IncidenceSystem([1, 1], nbr)


# --- residues ------------------------------------------------------------

def test_residue_examples():
    H = halved("delta2^{{3}}")
    S = tits_coset_geometry(H)
    R = residue(S, [])
    assert R.counts == S.counts
    # the vertices are the type-1 cosets in this generator order (string rho_1, rho_0, rho_2)
    assert S.counts[1] == 4
    R = residue(S, [(1, 0)])
    assert R.counts == [3, 3]
    assert is_connected(R)
    with pytest.raises(NotAFlag):
        residue(S, [(0, 0), (0, 1)])


def test_d4_residue_counts():
    H = halved("delta2^{{3,3}}")
    assert H.order() == 192
    S = tits_coset_geometry(H)
    R = residue(S, [(0, 0)])
    G0 = H.parabolic([1, 2, 3])
    assert R.counts == [G0.order() // H.parabolic({1, 2, 3} - {j}).order() for j in (1, 2, 3)]
    assert is_residually_connected(S).passed


@pytest.mark.parametrize("sym", ["{5,3}", "{4,3,3}", "{3,3,4}", "delta2^{{3}}", "delta2^{{3,3}}"])
def test_corank_two_residues_are_cycles(sym):
    C = build_from_symbol(sym)
    for G in (C, halve(C).halved) if C.rank >= 3 else (C,):
        S = tits_coset_geometry(G)
        n = G.rank
        D = G.diagram()
        for i, j in combinations(range(n), 2):
            F = [(t, 0) for t in range(n) if t not in (i, j)]
            R = residue(S, F)
            p = D[i, j]
            assert R.counts == [p, p]
            assert all(bin(m).count("1") == 2 for m in R.nbr[0][1])
            assert is_connected(R)


# --- failure detection on hand-made systems -------------------------------

def test_thin_failure_reports_flag_and_elements():
    S = system_from_pairs([3, 3], {(0, 1): [(a, b) for a in range(3) for b in range(3)]})
    v = is_thin(S)
    assert v.failed and v.witness["type"] == 0 and v.witness["elements"] == [0, 1, 2]


def test_geometry_failure_reports_stuck_flag():
    # element 1 of type 0 meets a type-1 element but no type-2 element with it
    S = system_from_pairs([2, 1, 1], {(0, 1): [(0, 0), (1, 0)], (0, 2): [(0, 0)], (1, 2): [(0, 0)]})
    v = is_geometry(S)
    assert v.failed
    flag = [tuple(x) for x in v.witness["flag"]]
    assert S.is_flag(flag) and len(flag) < 3
    assert frozenset(flag) in brute_maximal_cliques(S)


def test_residual_connectivity_failure():
    # two disjoint triangles of a rank-2 geometry
    pairs = {(0, 1): [(0, 0), (0, 1), (1, 1), (1, 2), (2, 2), (2, 0),
                      (3, 3), (3, 4), (4, 4), (4, 5), (5, 5), (5, 3)]}
    S = system_from_pairs([6, 6], pairs)
    assert is_geometry(S).passed and is_thin(S).passed
    assert is_residually_connected(S, transitive=False).failed


def test_chamber_enumeration_cap():
    S = tits_coset_geometry(halved("delta2^{{4,3}}"))
    assert chamber_transitive(S, Caps(chambers=100)).status == "skipped"
    with pytest.raises(CapExceeded):
        list(iter_chambers(S, 10))


# --- pipeline ------------------------------------------------------------

def test_pipeline_tetrahedron_all_pass():
    rep = verify_regular_hypertope(halved("delta2^{{3}}"))
    assert [s.name for s in rep.stages] == ["c-group", "geometry", "chamber-transitive", "flag-transitive", "thin",
                                            "residually-connected", "regular-hypertope"]
    assert all(s.verdict.passed for s in rep.stages)
    assert rep.overall == "pass"


def test_pipeline_d4_and_b3():
    for sym, order in [("delta2^{{3,3}}", 192), ("delta2^{{4,3}}", 1536)]:
        H = halved(sym)
        assert H.order() == order
        rep = verify_regular_hypertope(H)
        assert rep.overall == "pass"
        assert rep.stage("chamber-transitive").verdict.details == [order]


def test_pipeline_negative_hemicube_dual():
    H = halved("dual:{4,3,3}/[0 1 2 3]^4")
    rep = verify_regular_hypertope(H)
    assert rep.overall == "fail"
    bad = rep.first_failure()
    assert bad.name == "geometry"
    flag = [tuple(x) for x in bad.verdict.witness["flag"]]
    S = tits_coset_geometry(H)
    assert S.is_flag(flag) and len(flag) < H.rank
    chosen = {t for t, _ in flag}
    cand = S.candidates(flag)
    assert all(cand[t] == 0 for t in range(H.rank) if t not in chosen)
    # later stages are not run, and are never reported as passing
    after = rep.stages[rep.stages.index(bad) + 1:-1]
    assert after and all(s.verdict.status == "skipped" for s in after)


def test_pipeline_keep_going_diagnoses_every_axiom():
    rep = verify_regular_hypertope(halved("dual:{4,3,3}/[0 1 2 3]^4"), keep_going=True)
    assert rep.verdict("c-group") == "pass"
    assert rep.verdict("geometry") == "fail"
    assert rep.verdict("residually-connected") == "fail"
    assert rep.verdict("flag-transitive") == "fail"
    assert rep.overall == "fail"


def test_pipeline_cgroup_level():
    rep = verify_regular_hypertope(halved("delta2^{{3}}"), level="cgroup")
    assert [s.name for s in rep.stages] == ["c-group"]
    assert rep.overall == "pass"


def test_pipeline_skips_at_scale():
    H = halved("delta2^{{5,3,3}}")
    rep = verify_regular_hypertope(H)
    assert rep.verdict("c-group") == "pass"
    assert rep.verdict("geometry") == "skipped"
    assert rep.overall == "skipped"


def test_pipeline_counterexample_fails_at_cgroup():
    from hypertope.permcore import Permutation
    C = CGroup([Permutation.parse(t, 4) for t in ("(1 2)", "(3 4)", "(1 3)(2 4)")], 4)
    rep = verify_regular_hypertope(C)
    assert rep.first_failure().name == "c-group"
    assert rep.overall == "fail"


def test_report_json_schema():
    doc = verify_regular_hypertope(halved("delta2^{{3}}")).to_json()
    assert set(doc) == {"level", "stages", "overall"}
    for st in doc["stages"]:
        assert {"name", "verdict", "millis"} <= set(st)
    assert "millis" not in verify_regular_hypertope(halved("delta2^{{3}}")).to_json(timings=False)["stages"][0]


# --- local sphericity ----------------------------------------------------

def test_locally_spherical_examples():
    r = locally_spherical_report(halved("delta2^{{3,3}}"))
    assert r.locally_spherical and r.type_label == "spherical" and r.name == "D4"
    r = locally_spherical_report(halved("delta2^{{4,3}}"))
    assert r.locally_spherical and r.type_label == "euclidean" and r.name == "B~3"
    r = locally_spherical_report(halved("delta2^{{5,3}}"))
    assert r.locally_spherical and r.type_label == "hyperbolic"
    assert len(r.entries) == 2**4 - 2


def test_locally_spherical_fails_on_proper_quotient_residue():
    # the hemicube facet group is a quotient of its Coxeter group's residue
    r = locally_spherical_report(build_from_symbol("dual:{4,3,3}/[0 1 2 3]^4"))
    assert r.locally_spherical is True  # every proper residue is a full spherical group
    r = locally_spherical_report(build_from_symbol("{4,4,3}/[0 1 2 1]^2"))
    assert r.locally_spherical is False


# --- exports ---------------------------------------------------------------

def test_exports():
    S = tits_coset_geometry(coxeter_polytope((4,)))
    doc = S.to_json()
    assert doc["elements"] == [4, 4] and len(doc["incidence"]["0-1"]) == 8
    dot = S.to_dot()
    assert dot.startswith("graph incidence {") and dot.count(" -- ") == 8
