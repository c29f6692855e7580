"""Detection rules, impact classification, and their properties."""

from __future__ import annotations

import pytest

from conftest import jar_content, model_of
from jarcompat.classfile import ClassSpec, FieldSpec, MethodSpec
from jarcompat.delta import BcKind, compute_delta
from jarcompat.detect import (
    BREAKING_USE,
    IMPACT_RULES,
    NON_BREAKING_USE,
    UNUSED,
    DeltaUsageMismatch,
    classify_impact,
    compute_detections,
    rule_note,
)
from jarcompat.usage import UseKind, extract_usage


def _scenario(old_specs, new_specs, client_specs):
    old = model_of(old_specs, model_id="lib-old")
    new = model_of(new_specs, model_id="lib-new")
    delta = compute_delta(old, new)
    usage = extract_usage(jar_content(client_specs), old)
    detections = compute_detections(delta, usage)
    return delta, usage, detections


def test_interface_evolution_yields_exactly_one_detection():
    # A client type implements a library interface that gains an abstract
    # method in the new version: one detection, via the implements relation.
    delta, usage, detections = _scenario(
        [
            ClassSpec(
                "lib.Handler",
                kind="interface",
                methods=(MethodSpec("a", "()Ljava/lang/String;", is_abstract=True),),
            )
        ],
        [
            ClassSpec(
                "lib.Handler",
                kind="interface",
                methods=(
                    MethodSpec("a", "()Ljava/lang/String;", is_abstract=True),
                    MethodSpec("refresh", "()Ljava/lang/String;", is_abstract=True),
                ),
            )
        ],
        [
            ClassSpec(
                "cli.MockHandler",
                interfaces=("lib.Handler",),
                methods=(MethodSpec("a", "()Ljava/lang/String;"),),
            )
        ],
    )
    assert len(detections) == 1
    detection = detections[0]
    assert detection.bc_kind is BcKind.METHOD_ADDED_TO_INTERFACE
    assert detection.use_kind is UseKind.IMPLEMENTS
    assert detection.client_element == "cli.MockHandler"
    assert detection.library_element == "lib.Handler.refresh()Ljava/lang/String;"
    summary = classify_impact(delta, usage, detections)
    assert summary.broken


def test_client_declaring_the_new_method_is_not_broken():
    delta, usage, detections = _scenario(
        [ClassSpec("lib.I", kind="interface")],
        [ClassSpec("lib.I", kind="interface", methods=(MethodSpec("m", is_abstract=True),))],
        [ClassSpec("cli.Ready", interfaces=("lib.I",), methods=(MethodSpec("m"),))],
    )
    assert detections == []
    summary = classify_impact(delta, usage, detections)
    assert summary.per_change[("lib.I.m()V", "methodAddedToInterface")] == NON_BREAKING_USE
    assert not summary.broken


def test_empty_delta_yields_no_detections():
    delta, usage, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("m"),))],
        [ClassSpec("lib.A", methods=(MethodSpec("m"),))],
        [ClassSpec("cli.C", methods=(MethodSpec("x", calls=(("lib.A", "m", "()V"),)),))],
    )
    assert detections == []


def test_method_removed_requires_the_member_reference():
    # The client references type A but never the removed method.
    delta, usage, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("m"), MethodSpec("keep")))],
        [ClassSpec("lib.A", methods=(MethodSpec("keep"),))],
        [ClassSpec("cli.C", methods=(MethodSpec("x", calls=(("lib.A", "keep", "()V"),)),))],
    )
    assert detections == []
    summary = classify_impact(delta, usage, detections)
    assert summary.per_change[("lib.A.m()V", "methodRemoved")] == UNUSED


def test_interface_removed_descriptor_use_is_non_breaking():
    delta, usage, detections = _scenario(
        [ClassSpec("lib.I", kind="interface"), ClassSpec("lib.A", interfaces=("lib.I",), methods=(MethodSpec("keep"),))],
        [ClassSpec("lib.I", kind="interface"), ClassSpec("lib.A", methods=(MethodSpec("keep"),))],
        [ClassSpec("cli.C", fields=(FieldSpec("a", "Llib/A;"),))],
    )
    assert detections == []
    summary = classify_impact(delta, usage, detections)
    assert summary.per_change[("lib.A", "interfaceRemoved")] == NON_BREAKING_USE


def test_visibility_predicate_spares_same_package_clients():
    # The client lives in the library package, so package visibility still
    # admits it.
    delta, usage, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("m"),))],
        [ClassSpec("lib.A", methods=(MethodSpec("m", visibility="package"),))],
        [ClassSpec("lib.Friend", methods=(MethodSpec("x", calls=(("lib.A", "m", "()V"),)),))],
    )
    assert detections == []


def test_visibility_predicate_flags_foreign_package():
    _, _, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("m"),))],
        [ClassSpec("lib.A", methods=(MethodSpec("m", visibility="package"),))],
        [ClassSpec("cli.C", methods=(MethodSpec("x", calls=(("lib.A", "m", "()V"),)),))],
    )
    assert len(detections) == 1
    assert detections[0].confidence == "certain"


def test_protected_member_spares_direct_subtype():
    _, _, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("m"),))],
        [ClassSpec("lib.A", methods=(MethodSpec("m", visibility="protected"),))],
        [
            ClassSpec(
                "cli.Sub",
                super_name="lib.A",
                methods=(MethodSpec("x", calls=(("lib.A", "m", "()V"),)),),
            )
        ],
    )
    assert detections == []


def test_protected_constructor_always_pessimistic():
    _, _, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("<init>"),))],
        [ClassSpec("lib.A", methods=(MethodSpec("<init>", visibility="protected"),))],
        [
            ClassSpec(
                "cli.Sub",
                super_name="lib.A",
                methods=(MethodSpec("<init>", calls=(("lib.A", "<init>", "()V"),)),),
            )
        ],
    )
    assert len(detections) == 1
    assert detections[0].confidence == "pessimistic"
    assert detections[0].bc_kind is BcKind.CONSTRUCTOR_LESS_ACCESSIBLE


def test_method_now_final_flags_subtypes_pessimistically():
    _, _, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("run"),))],
        [ClassSpec("lib.A", methods=(MethodSpec("run", is_final=True),))],
        [ClassSpec("cli.Sub", super_name="lib.A", methods=(MethodSpec("run"),))],
    )
    assert [d.confidence for d in detections] == ["pessimistic"]
    assert detections[0].use_kind is UseKind.EXTENDS


def test_new_checked_exception_flags_every_invocation():
    _, _, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("run"),))],
        [ClassSpec("lib.A", methods=(MethodSpec("run", exceptions=("java.io.IOException",)),))],
        [ClassSpec("cli.C", methods=(MethodSpec("x", calls=(("lib.A", "run", "()V"),)),))],
    )
    assert len(detections) == 1
    assert detections[0].confidence == "pessimistic"


def test_constant_value_change_never_detects():
    delta, usage, detections = _scenario(
        [ClassSpec("lib.A", fields=(FieldSpec("c", is_static=True, is_final=True, constant=1),))],
        [ClassSpec("lib.A", fields=(FieldSpec("c", is_static=True, is_final=True, constant=2),))],
        [ClassSpec("cli.C", methods=(MethodSpec("x", field_reads=(("lib.A", "c", "I"),)),))],
    )
    assert detections == []
    summary = classify_impact(delta, usage, detections)
    assert summary.per_change[("lib.A.c", "fieldConstantValueChanged")] == NON_BREAKING_USE


def test_impact_partitions_changes():
    delta, usage, detections = _scenario(
        [
            ClassSpec(
                "lib.A",
                methods=(MethodSpec("gone"), MethodSpec("keep")),
                fields=(FieldSpec("f"), FieldSpec("g")),
            )
        ],
        [ClassSpec("lib.A", methods=(MethodSpec("keep"),), fields=(FieldSpec("g"),))],
        [
            ClassSpec(
                "cli.C",
                methods=(
                    MethodSpec(
                        "x",
                        calls=(("lib.A", "gone", "()V"),),
                    ),
                ),
            )
        ],
    )
    summary = classify_impact(delta, usage, detections)
    assert len(summary.per_change) == len(delta.changes)
    assert summary.per_change[("lib.A.gone()V", "methodRemoved")] == BREAKING_USE
    assert summary.per_change[("lib.A.f", "fieldRemoved")] == UNUSED
    categories = {UNUSED, NON_BREAKING_USE, BREAKING_USE}
    assert set(summary.per_change.values()) <= categories
    assert summary.broken


def test_monotonicity_adding_usage_never_removes_detections():
    old_specs = [ClassSpec("lib.A", methods=(MethodSpec("gone"), MethodSpec("keep")))]
    new_specs = [ClassSpec("lib.A", methods=(MethodSpec("keep"),))]
    small_client = [
        ClassSpec("cli.C", methods=(MethodSpec("x", calls=(("lib.A", "gone", "()V"),)),))
    ]
    big_client = [
        ClassSpec(
            "cli.C",
            methods=(
                MethodSpec("x", calls=(("lib.A", "gone", "()V"),)),
                MethodSpec("y", calls=(("lib.A", "keep", "()V"), ("lib.A", "gone", "()V"))),
            ),
        )
    ]
    _, _, small = _scenario(old_specs, new_specs, small_client)
    _, _, big = _scenario(old_specs, new_specs, big_client)
    assert set(small) <= set(big)


def test_detections_project_onto_delta():
    for case_client in (
        [ClassSpec("cli.C", methods=(MethodSpec("x", calls=(("lib.A", "gone", "()V"),)),))],
        [ClassSpec("cli.Sub", super_name="lib.A")],
    ):
        delta, _, detections = _scenario(
            [ClassSpec("lib.A", methods=(MethodSpec("gone"), MethodSpec("keep")))],
            [ClassSpec("lib.A", is_final=True, methods=(MethodSpec("keep"),))],
            case_client,
        )
        change_keys = {(c.element, c.kind) for c in delta.changes}
        for detection in detections:
            assert (detection.library_element, detection.bc_kind) in change_keys


def test_mismatched_usage_raises():
    old = model_of([ClassSpec("lib.A", methods=(MethodSpec("m"), MethodSpec("keep")))], model_id="v1")
    new = model_of([ClassSpec("lib.A", methods=(MethodSpec("keep"),))], model_id="v2")
    other = model_of([ClassSpec("lib.A", methods=(MethodSpec("m"), MethodSpec("keep")))], model_id="elsewhere")
    delta = compute_delta(old, new)
    usage = extract_usage(
        jar_content([ClassSpec("cli.C", methods=(MethodSpec("x", calls=(("lib.A", "m", "()V"),)),))]),
        other,
    )
    with pytest.raises(DeltaUsageMismatch):
        compute_detections(delta, usage)


def test_rule_table_is_total_and_documented():
    assert set(IMPACT_RULES) == set(BcKind)
    for kind, matchers in IMPACT_RULES.items():
        for matcher in matchers:
            assert matcher.confidence in ("certain", "pessimistic")
            if matcher.confidence == "pessimistic":
                note = rule_note(kind, matcher.use_kind)
                assert kind.value in note


def test_detections_are_sorted_deterministically():
    _, _, detections = _scenario(
        [ClassSpec("lib.A", methods=(MethodSpec("a"), MethodSpec("b"), MethodSpec("keep")))],
        [ClassSpec("lib.A", methods=(MethodSpec("keep"),))],
        [
            ClassSpec(
                "cli.C",
                methods=(
                    MethodSpec("x", calls=(("lib.A", "a", "()V"), ("lib.A", "b", "()V"))),
                ),
            )
        ],
    )
    keys = [d.sort_key() for d in detections]
    assert keys == sorted(keys)
    assert len(detections) == 2
