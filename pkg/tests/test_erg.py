from __future__ import annotations

import pytest

from stabgrid.erg import (
    ErgPlan,
    build_circuit,
    build_circuit_general,
    build_circuit_paper,
    build_h1,
    check_mapping_claims,
    classify_term,
    gsd_recursion_check,
    inserted_log2_gsd,
    validate_circuit_conditions,
    verify_fixed_point,
)
from stabgrid.errors import ConstructionError, DomainError
from stabgrid.lattice import QubitIndexMap
from stabgrid.models import ModelSpec, build_model, log2_gsd, verify_commutation
from stabgrid.pauli import CnotCircuit, PauliString, circuit_conjugate, multiply


def plan_0123():
    return ErgPlan(ModelSpec(0, 1, 2, 3), (2, 2, 2))


def test_plan_validation():
    plan = plan_0123()
    assert plan.axis == 2
    assert plan.lat_from.dims == (2, 2, 2)
    assert plan.lat_to.dims == (2, 2, 3)
    assert ErgPlan(ModelSpec(0, 1, 2, 3), (2, 2, 2), 0).lat_to.dims == (3, 2, 2)
    with pytest.raises(DomainError):
        ErgPlan(ModelSpec(0, 1, 2, 3), (2, 2, 2), 5)
    with pytest.raises(DomainError):
        ErgPlan(ModelSpec(0, 1, 2, 3), (2, 2, 2), -1, "handwaved")


def test_h1_census_3d():
    h1 = build_h1(plan_0123())
    kinds = {}
    for tag, _ in h1.generators:
        kinds[tag.kind] = kinds.get(tag.kind, 0) + 1
    assert kinds == {"A": 8, "B": 24, "ZZ": 4, "inserted-A": 4, "inserted-B": 4}
    assert h1.n_qubits == 36
    assert len(h1.generators) == 44


def test_h1_commutes():
    assert verify_commutation(build_h1(plan_0123())) == []
    assert verify_commutation(build_h1(ErgPlan(ModelSpec(1, 2, 3, 4), (2,) * 4))) == []
    assert verify_commutation(build_h1(ErgPlan(ModelSpec(0, 1, 2, 2), (3, 3)))) == []


def test_h1_gsd_counts_insertion():
    plan = plan_0123()
    h1 = build_h1(plan)
    assert log2_gsd(h1) == 11  # 9 from the small torus + 2 inserted
    assert inserted_log2_gsd(plan) == 2


def test_straddling_pair_has_no_inserted_layer_support():
    plan = plan_0123()
    h1 = build_h1(plan)
    qmap = h1.qubits
    pairs = [(t, op) for t, op in h1.generators if t.kind == "A" and t.cube[2] == 1]
    assert len(pairs) == 4
    for _, op in pairs:
        assert op.weight() == 16  # two weight-12 terms sharing four spins
        for i in range(h1.n_qubits):
            if (op.x_bits >> i) & 1:
                assert qmap.cube(i)[2] != 2


def test_base_term_straddles_via_partner_spin():
    # the base term just above the insertion reaches down to the duplicated
    # partner layer: it equals (naive term touching the cut spin) x (ZZ pair)
    plan = plan_0123()
    h1 = build_h1(plan)
    qmap = h1.qubits
    _, got = h1.find("B", (0, 0, 4), (0, 2))

    def z_on(cubes):
        return PauliString.z_on(len(qmap), (qmap.index(c) for c in cubes))

    naive = z_on([(1, 0, 4), (3, 0, 4), (0, 0, 5), (0, 0, 1)])
    zz = z_on([(0, 0, 1), (0, 0, 3)])
    assert got == multiply(naive, zz)
    assert got == z_on([(1, 0, 4), (3, 0, 4), (0, 0, 5), (0, 0, 3)])


def test_product_state_insertion_for_2d():
    plan = ErgPlan(ModelSpec(0, 1, 2, 2), (3, 3))
    h1 = build_h1(plan)
    singles = [op for t, op in h1.generators if t.kind == "inserted-A"]
    assert len(singles) == 3
    assert all(op.weight() == 1 for op in singles)
    assert not any(t.kind == "inserted-B" for t, _ in h1.generators)
    assert inserted_log2_gsd(plan) == 0


# ---------------------------------------------------------------------------
# circuits
# ---------------------------------------------------------------------------

ALL_PLANS = [
    ErgPlan(ModelSpec(0, 1, 2, 2), (3, 3)),
    ErgPlan(ModelSpec(0, 1, 2, 3), (2, 2, 2)),
    ErgPlan(ModelSpec(0, 1, 2, 4), (2, 2, 2, 2)),
    ErgPlan(ModelSpec(1, 2, 3, 4), (2, 2, 2, 2)),
]


@pytest.mark.parametrize("plan", ALL_PLANS, ids=lambda p: str(p.spec))
def test_paper_circuit_satisfies_conditions(plan):
    circuit = build_circuit_paper(plan)
    rep = validate_circuit_conditions(circuit, plan)
    assert rep.ok, rep.failed()
    assert set(rep.conditions) == {
        "gate-positions",
        "translation-invariance",
        "partner-rule",
        "cut-controls",
        "parallel-pairs",
    }


@pytest.mark.parametrize(
    "spec,dims",
    [
        (ModelSpec(0, 1, 2, 3), (2, 2, 2)),
        (ModelSpec(0, 1, 2, 3), (3, 3, 2)),
        (ModelSpec(0, 1, 2, 4), (2, 2, 2, 2)),
        (ModelSpec(1, 2, 3, 4), (2, 2, 2, 2)),
    ],
    ids=str,
)
def test_general_circuit_satisfies_conditions(spec, dims):
    plan = ErgPlan(spec, dims, -1, "general")
    circuit = build_circuit_general(plan)
    rep = validate_circuit_conditions(circuit, plan)
    assert rep.ok, rep.failed()


def test_general_circuit_needs_room():
    with pytest.raises(DomainError):
        build_circuit_general(ErgPlan(ModelSpec(0, 1, 2, 2), (3, 3), -1, "general"))


def test_gate_counts_scale_with_cells():
    c = build_circuit(ErgPlan(ModelSpec(0, 1, 2, 2), (3, 3)))
    assert len(c) == 9  # three gates per transverse cell
    c = build_circuit(plan_0123())
    assert len(c) == 16


def test_tampered_circuit_fails_validation():
    plan = plan_0123()
    circuit = build_circuit(plan)
    clipped = CnotCircuit(circuit.n, circuit.gates[:-1], layered=True)
    rep = validate_circuit_conditions(clipped, plan)
    assert not rep.ok
    assert rep.failed()
    # a gate whose control is off the insertion breaks gate-positions
    qmap = QubitIndexMap(plan.lat_to, plan.spec.ds)
    far_control = next(
        i for i in range(len(qmap)) if qmap.cube(i)[2] == 4
    )
    far_target = next(
        i for i in range(len(qmap)) if qmap.cube(i)[2] == 5
    )
    doped = CnotCircuit(circuit.n, circuit.gates + ((far_control, far_target),))
    rep = validate_circuit_conditions(doped, plan)
    assert not rep.conditions["gate-positions"]


# ---------------------------------------------------------------------------
# the fixed point
# ---------------------------------------------------------------------------


@pytest.mark.parametrize("source", ["paper", "general"])
def test_fixed_point_small_3d(backend, source):
    if source == "general":
        plan = ErgPlan(ModelSpec(0, 1, 2, 3), (2, 2, 2), -1, source)
    else:
        plan = plan_0123()
    rep = verify_fixed_point(plan)
    assert rep["equal"] is True
    assert rep["recursion_ok"] is True
    assert rep["h1_rank"] == rep["h2_rank"] == rep["h3_rank"] == 25
    assert rep["gsd_from"] == 9 and rep["gsd_to"] == 11 and rep["inserted_gsd"] == 2


def test_fixed_point_2d_product_state(backend):
    rep = verify_fixed_point(ErgPlan(ModelSpec(0, 1, 2, 2), (3, 3)))
    assert rep["equal"] and rep["recursion_ok"]
    assert rep["gsd_from"] == rep["gsd_to"] == 2
    assert rep["inserted_gsd"] == 0


@pytest.mark.parametrize("axis", [0, 1, 2])
def test_fixed_point_any_axis(axis):
    rep = verify_fixed_point(ErgPlan(ModelSpec(0, 1, 2, 3), (2, 3, 2), axis))
    assert rep["equal"] and rep["recursion_ok"]
    assert rep["axis"] == axis + 1


def test_inserted_top_term_becomes_standard_top_term():
    # conjugating the inserted layer's X term yields the standard top term
    # at the same transverse position, half a step down the grown axis
    plan = plan_0123()
    h1 = build_h1(plan)
    circuit = build_circuit(plan)
    h3 = build_model(plan.spec, plan.lat_to)
    tag, op = h1.find("inserted-A", (3, 1, 2))
    img = circuit_conjugate(op, circuit)
    _, want = h3.find("A", (3, 1, 1))
    assert img == want


def test_zz_pair_becomes_base_term():
    plan = plan_0123()
    h1 = build_h1(plan)
    circuit = build_circuit(plan)
    h3 = build_model(plan.spec, plan.lat_to)
    tag, op = h1.find("ZZ", (0, 0, 1))
    img = circuit_conjugate(op, circuit)
    assert any(img == cand for t, cand in h3.by_kind("B") if t.cube == (0, 0, 2))


# ---------------------------------------------------------------------------
# classification and the audit
# ---------------------------------------------------------------------------


def test_classify_census_3d():
    plan = plan_0123()
    h1 = build_h1(plan)
    counts: dict[str, int] = {}
    for _, op in h1.generators:
        try:
            cls = classify_term(op, plan)
        except DomainError:
            cls = "far"
        counts[cls] = counts.get(cls, 0) + 1
    assert counts == {
        "AI": 4, "AII": 4, "BI": 4, "BII": 8, "BIV": 4, "BV": 12, "C": 4, "far": 4,
    }


def test_classify_rejects_junk():
    plan = plan_0123()
    n = build_h1(plan).n_qubits
    with pytest.raises(DomainError):
        classify_term(PauliString(n, 1, 1), plan)  # mixed X and Z
    with pytest.raises(DomainError):
        classify_term(PauliString(n, 0, 0), plan)  # identity
    with pytest.raises(DomainError):
        classify_term(PauliString(n, 0, 0b111), plan)  # no such base term


@pytest.mark.parametrize(
    "spec,dims",
    [
        (ModelSpec(0, 1, 2, 2), (3, 3)),
        (ModelSpec(0, 1, 2, 3), (2, 2, 2)),
        (ModelSpec(0, 1, 2, 3), (3, 3, 2)),
        (ModelSpec(0, 1, 2, 4), (2, 2, 2, 2)),
        (ModelSpec(1, 2, 3, 4), (2, 2, 2, 2)),
    ],
    ids=str,
)
def test_mapping_audit_zero_violations(spec, dims):
    rep = check_mapping_claims(ErgPlan(spec, dims))
    assert rep.ok, [f"{r.tag}: {r.term_class} {r.detail}" for r in rep.violations]
    assert rep.n_checked == len(build_h1(ErgPlan(spec, dims)).generators)


def test_mapping_audit_sees_shared_control_cases():
    # the 4D model exercises every base-term case: some cut spins share a
    # control (no shadow), some controls share a base (two shadows)
    rep = check_mapping_claims(ErgPlan(ModelSpec(1, 2, 3, 4), (2, 2, 2, 2)))
    details = [r.detail for r in rep.rows if r.term_class == "BIII"]
    assert details, "expected BIII rows for a half-integer base family"
    assert any("shadows 0" in d for d in details)
    assert any("shadows 2" in d for d in details)


# ---------------------------------------------------------------------------
# degeneracy recursion
# ---------------------------------------------------------------------------


def test_recursion_increments():
    assert gsd_recursion_check(ModelSpec(0, 1, 2, 3), (2, 2, 2))["increment"] == 2
    assert gsd_recursion_check(ModelSpec(1, 2, 3, 4), (2, 2, 2, 2))["increment"] == 3
    rep = gsd_recursion_check(ModelSpec(0, 1, 2, 4), (2, 2, 2, 2))
    assert rep["increment"] == 9  # one 3D layer on a 2x2x2 cross-section
    rep = gsd_recursion_check(ModelSpec(0, 1, 2, 4), (3, 3, 3, 2))
    assert rep["increment"] == 2 * 9 - 3


def test_recursion_requires_inserted_model():
    with pytest.raises(DomainError):
        gsd_recursion_check(ModelSpec(0, 1, 2, 2), (3, 3))
