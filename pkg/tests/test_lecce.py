from pathlib import Path

import pytest

from subentity_lab.lecce import (
    LabObject,
    LabWorld,
    WorldInvalid,
    build_lecce_sps,
    certainly_domains,
    check_partition_property,
    partition_effects,
    partition_states,
    validate_world,
)
from subentity_lab.modelio import parse_model
from subentity_lab.sps import state_preorder

FIXTURES = Path(__file__).parent / "fixtures"


def load_world(name):
    doc = parse_model((FIXTURES / name).read_text())
    return doc.body["world"]


def make_world(labs, preparers, registerers, ideal, rows):
    objects = {
        lab: tuple(
            LabObject(name, prep, tuple(sorted(out.items())))
            for name, prep, out in rows[lab]
        )
        for lab in labs
    }
    return LabWorld(tuple(labs), tuple(preparers), tuple(registerers),
                    frozenset(ideal), objects)


def two_lab_world():
    return load_world("two_labs.labworld")


# --- validation -----------------------------------------------------------


def test_fixture_world_validates():
    assert validate_world(two_lab_world()).ok


def test_mismatch_world_flagged():
    w = load_world("two_labs_mismatch.labworld")
    val = validate_world(w)
    assert not val.ok
    pi, r, lab1, lab2, f1, f2 = val.violations[0]
    assert (pi, r) == ("p1", "r2")
    assert f1 != f2
    with pytest.raises(WorldInvalid):
        partition_states(w)
    with pytest.raises(WorldInvalid):
        build_lecce_sps(w)


# --- partitions -----------------------------------------------------------


def test_state_partition():
    states = partition_states(two_lab_world())
    members = sorted(sorted(S.member_devices) for S in states)
    assert members == [["p1", "p2"], ["p3"]]
    big = next(S for S in states if len(S.member_devices) == 2)
    assert big.extensions["j1"] == frozenset({"x1", "x2", "x3", "x4"})
    assert big.extensions["j2"] == frozenset({"y1", "y2", "y3", "y4"})


def test_effect_partition():
    props, freq_only = partition_effects(two_lab_world())
    assert sorted(sorted(E.member_devices) for E in props) == [["r1"], ["r2"], ["r3"]]
    assert freq_only == ()


def test_frequency_equivalent_extension_distinct_pair_reported():
    # two ideal registers with identical statistics against the lone
    # preparer yet disjoint extensions
    rows = {"j": [
        ("x1", "p", {"ra": True, "rb": False}),
        ("x2", "p", {"ra": False, "rb": True}),
    ]}
    w = make_world(["j"], ["p"], ["ra", "rb"], ["ra", "rb"], rows)
    props, freq_only = partition_effects(w)
    assert len(props) == 2
    assert freq_only == (("ra", "rb"),)


def test_certainly_domains():
    w = two_lab_world()
    states = partition_states(w)
    props, _ = partition_effects(w)
    e_t, s_y = certainly_domains(states, props, w.labs)
    by_reg = {next(iter(E.member_devices)): E.id for E in props}
    s_big = next(S.id for S in states if len(S.member_devices) == 2)
    s_p3 = next(S.id for S in states if S.member_devices == frozenset({"p3"}))
    assert e_t[s_big] == frozenset({by_reg["r1"], by_reg["r3"]})
    assert e_t[s_p3] == frozenset({by_reg["r3"]})
    assert s_y[by_reg["r2"]] == frozenset()
    assert s_y[by_reg["r1"]] == frozenset({s_big})
    assert s_y[by_reg["r3"]] == frozenset({s_big, s_p3})
    # duality of the two maps
    for S in states:
        for E in props:
            assert (E.id in e_t[S.id]) == (S.id in s_y[E.id])


def test_partition_property_holds_on_fixture():
    w = two_lab_world()
    ok, problems = check_partition_property(w, partition_states(w))
    assert ok and problems == ()


def test_partition_property_detects_orphans():
    w = two_lab_world()
    states = partition_states(w)
    corrupt = LabWorld(w.labs, w.preparers, w.registerers, w.ideal, w.objects,
                       domains={"j1": tuple(o.name for o in w.objects["j1"]) + ("ghost",),
                                "j2": tuple(o.name for o in w.objects["j2"])})
    ok, problems = check_partition_property(corrupt, states)
    assert not ok
    assert any("ghost" in p for p in problems)


def test_partition_property_detects_overlap():
    w = two_lab_world()
    states = partition_states(w)
    # duplicate one state under a second id: extensions now overlap
    from dataclasses import replace
    doubled = list(states) + [replace(states[0], id=len(states))]
    ok, problems = check_partition_property(w, doubled)
    assert not ok
    assert any("share objects" in p for p in problems)


# --- induced state property system ----------------------------------------


def test_build_lecce_sps_fixture():
    build = build_lecce_sps(two_lab_world())
    assert build.sps is not None
    L = build.sps.lattice
    assert L.size == 3
    # a three-element chain: certainly-yes carriers {} < {S1} < {S1, S2}
    assert all(L.leq[i][j] == (i <= j) for i in range(3) for j in range(3))
    assert any("verified" in line for line in build.report)
    # no synthetic elements needed: r2 provides bottom, r3 the top
    assert all(cls for cls in build.property_classes)


def test_build_lecce_sps_synthetic_elements():
    rows = {"j": [("x1", "p", {"r": True})]}
    build = build_lecce_sps(make_world(["j"], ["p"], ["r"], ["r"], rows))
    assert any("synthetic bottom" in line for line in build.report)
    rows = {"j": [("x1", "p", {"r": False})]}
    build = build_lecce_sps(make_world(["j"], ["p"], ["r"], ["r"], rows))
    assert any("synthetic top" in line for line in build.report)


def test_sps_preorder_matches_certainly_true_inclusion():
    w = two_lab_world()
    build = build_lecce_sps(w)
    e_t, _ = certainly_domains(build.states, build.properties, w.labs)
    S = build.sps
    for p in range(S.num_states):
        for q in range(S.num_states):
            assert state_preorder(S, p, q) == (e_t[q] <= e_t[p])


def test_relabeling_invariance():
    w = two_lab_world()
    ren_obj = lambda n: "obj_" + n
    rows = {
        "lab_" + lab: [
            (ren_obj(o.name), o.preparer, dict(o.outcomes)) for o in w.objects[lab]
        ]
        for lab in w.labs
    }
    v = make_world(["lab_" + l for l in w.labs], w.preparers, w.registerers,
                   w.ideal, rows)
    a, b = build_lecce_sps(w), build_lecce_sps(v)
    assert a.sps.lattice.leq == b.sps.lattice.leq
    assert a.sps.xi == b.sps.xi
    assert [S.member_devices for S in a.states] == [S.member_devices for S in b.states]
