"""Axiom checkers against naive quantified brute-force evaluation.

The oracles below evaluate each axiom as a literal quantified formula,
with no pruning; the checkers must agree with them on every lattice in
the corpus.
"""

from itertools import permutations

import pytest

from subentity_lab.axioms import (
    AXIOM_ORDER,
    check_atomicity,
    check_covering_law,
    check_infinite_length,
    check_irreducibility,
    check_orthocomplementation,
    check_plane_transitivity,
    check_state_determination,
    check_weak_modularity,
    orthocomplementations,
    run_battery,
)
from subentity_lab.lattice import interval, join, meet
from subentity_lab.sps import atomic_sps, build_sps

from conftest import CORPUS, boolean_square, chain, covering_fail, mo2, n5, o6


# --- oracles --------------------------------------------------------------


def oracle_orthocomplementations(L):
    out = []
    for p in permutations(range(L.size)):
        if all(p[p[a]] == a for a in range(L.size)) and all(
            (not L.leq[a][b] or L.leq[p[b]][p[a]])
            and L.meet_table[a][p[a]] == L.bottom
            and L.join_table[a][p[a]] == L.top
            for a in range(L.size)
            for b in range(L.size)
        ):
            out.append(p)
    return sorted(set(out))


def oracle_state_determination(S):
    L = S.lattice
    return all(
        meet(L, S.xi[p]) != meet(L, S.xi[q]) or p == q
        for p in range(S.num_states)
        for q in range(S.num_states)
    )


def oracle_atomicity(S):
    return all(meet(S.lattice, S.xi[p]) in S.lattice.atoms for p in range(S.num_states))


def oracle_covering_law(L):
    return all(
        x == a or x == L.join_table[a][b]
        for a in range(L.size)
        for b in L.atoms
        for x in range(L.size)
        if L.leq[a][x] and a != x and L.leq[x][L.join_table[a][b]] and x != L.join_table[a][b]
    )


def oracle_weak_modularity(L, comp):
    return all(
        L.join_table[L.meet_table[b][comp[a]]][a] == b
        for a in range(L.size)
        for b in range(L.size)
        if L.leq[a][b]
    )


def oracle_plane_transitivity(L):
    autos = [
        p for p in permutations(range(L.size))
        if all(L.leq[x][y] == L.leq[p[x]][p[y]] for x in range(L.size) for y in range(L.size))
    ]
    def witnessed(s, t):
        for p in autos:
            if p[s] != t:
                continue
            for s1 in L.atoms:
                for s2 in L.atoms:
                    if s1 != s2 and all(
                        p[a] == a for a in interval(L, L.bottom, L.join_table[s1][s2])
                    ):
                        return True
        return False
    return all(witnessed(s, t) for s in L.atoms for t in L.atoms)


def oracle_irreducibility(L, comp):
    return all(
        b == L.bottom or b == L.top
        for b in range(L.size)
        if all(
            L.join_table[L.meet_table[b][a]][L.meet_table[b][comp[a]]] == b
            for a in range(L.size)
        )
    )


def oracle_max_orthogonal(L, comp):
    elems = [x for x in range(L.size) if x != L.bottom]
    def orthogonal(b, c):
        return any(L.leq[b][a] and L.leq[c][comp[a]] for a in range(L.size))
    best = 0
    # exhaustive subset scan (corpus lattices are small)
    for mask in range(1 << len(elems)):
        fam = [elems[i] for i in range(len(elems)) if mask >> i & 1]
        if all(orthogonal(b, c) and orthogonal(c, b) for i, b in enumerate(fam) for c in fam[i + 1:]):
            best = max(best, len(fam))
    return best


# --- agreement with the oracles ------------------------------------------


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_checkers_agree_with_bruteforce(name):
    L = CORPUS[name]
    S = atomic_sps(L)
    assert check_state_determination(S).passed == oracle_state_determination(S)
    assert check_atomicity(S).passed == oracle_atomicity(S)
    comps = oracle_orthocomplementations(L)
    assert orthocomplementations(L) == comps
    assert check_orthocomplementation(S).passed == bool(comps)
    assert check_covering_law(S).passed == oracle_covering_law(L)
    assert check_plane_transitivity(S).passed == oracle_plane_transitivity(L)
    if comps:
        assert check_weak_modularity(S).passed == oracle_weak_modularity(L, comps[0])
        assert check_irreducibility(S).passed == oracle_irreducibility(L, comps[0])
        v = check_infinite_length(S)
        assert v.passed is False
        assert len(v.counterexample) == oracle_max_orthogonal(L, comps[0])


# --- pinned verdicts from hand analysis -----------------------------------


def test_state_determination_examples():
    L = boolean_square()
    assert check_state_determination(atomic_sps(chain(2))).passed
    dup = build_sps(L, 2, [[False, True, False, True], [False, True, False, True]])
    v = check_state_determination(dup)
    assert not v.passed and v.counterexample == (0, 1)


def test_atomicity_examples():
    v = check_atomicity(build_sps(chain(3), 1, [[False, False, True]]))
    assert not v.passed and v.counterexample == (0, 2)
    assert check_atomicity(build_sps(chain(2), 1, [[False, True]])).passed


def test_orthocomplementation_examples():
    v = check_orthocomplementation(atomic_sps(boolean_square()))
    assert v.passed and v.witness == (3, 2, 1, 0)
    assert not check_orthocomplementation(atomic_sps(n5())).passed
    hexv = check_orthocomplementation(atomic_sps(o6()))
    assert hexv.passed and hexv.witness == (5, 4, 3, 2, 1, 0)


def test_covering_law_counterexample_lattice():
    v = check_covering_law(atomic_sps(covering_fail()))
    assert not v.passed
    a, b, x = v.counterexample
    L = covering_fail()
    assert L.lt(a, x) and L.lt(x, L.join_table[a][b]) and b in L.atoms


def test_weak_modularity_hexagon_fails():
    S = atomic_sps(o6())
    v = check_weak_modularity(S)
    assert not v.passed
    a, b = v.counterexample
    L = S.lattice
    comp = orthocomplementations(L)[0]
    assert L.leq[a][b]
    assert L.join_table[L.meet_table[b][comp[a]]][a] == a != b


def test_irreducibility_examples():
    v = check_irreducibility(atomic_sps(boolean_square()))
    assert not v.passed and v.counterexample in (1, 2)  # any proper element reduces
    assert check_irreducibility(atomic_sps(mo2())).passed
    assert check_irreducibility(atomic_sps(chain(2))).passed


def test_infinite_length_reports_family_size():
    assert len(check_infinite_length(atomic_sps(boolean_square())).counterexample) == 2
    assert len(check_infinite_length(atomic_sps(mo2())).counterexample) == 2
    assert len(check_infinite_length(atomic_sps(chain(2))).counterexample) == 1


def test_plane_transitivity_examples():
    assert not check_plane_transitivity(atomic_sps(boolean_square())).passed
    assert not check_plane_transitivity(atomic_sps(mo2())).passed


def test_battery_order_and_boolean_square_vector():
    verdicts = run_battery(atomic_sps(boolean_square()))
    assert [v.axiom for v in verdicts] == list(AXIOM_ORDER)
    assert [v.passed for v in verdicts] == [True, True, True, True, True, False, False, False]


def test_battery_mo2_vector():
    got = {v.axiom: v.passed for v in run_battery(atomic_sps(mo2()))}
    assert got["irreducibility"] is True
    assert got["weak_modularity"] is True
    assert got["plane_transitivity"] is False
    assert got["infinite_length"] is False


def test_battery_two_chain():
    got = {v.axiom: v.passed for v in run_battery(atomic_sps(chain(2)))}
    assert got["state_determination"] is True
    assert got["atomicity"] is True


def test_comp_dependent_verdicts_stable_across_witnesses():
    # wherever several orthocomplementations exist, the dependent verdicts
    # must not depend on the choice (or the battery must flag it)
    for L in CORPUS.values():
        comps = orthocomplementations(L)
        if len(comps) < 2:
            continue
        S = atomic_sps(L)
        wm = {check_weak_modularity(S, comp=c).passed for c in comps}
        irr = {check_irreducibility(S, comp=c).passed for c in comps}
        battery = {v.axiom: v.passed for v in run_battery(S)}
        assert (len(wm) == 1) == (battery["weak_modularity"] is not None)
        assert (len(irr) == 1) == (battery["irreducibility"] is not None)
