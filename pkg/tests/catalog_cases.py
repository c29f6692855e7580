"""Per-kind fixture pairs for the breaking-change catalog.

Every kind has a pair of class lists (old, new) whose computed delta must
equal the hand-enumerated ``expected`` set exactly, except for entries in
``coupled`` that are unavoidable with effective-member comparison (the
coupling is part of the documented catalog semantics).
"""

from __future__ import annotations

from dataclasses import dataclass

from jarcompat.classfile import ClassSpec, FieldSpec, MethodSpec

PKG = "fix"


def cls(name: str, **kwargs) -> ClassSpec:
    return ClassSpec(name=f"{PKG}.{name}", **kwargs)


def method(name: str, descriptor: str = "()V", **kwargs) -> MethodSpec:
    return MethodSpec(name=name, descriptor=descriptor, **kwargs)


def field(name: str, descriptor: str = "I", **kwargs) -> FieldSpec:
    return FieldSpec(name=name, descriptor=descriptor, **kwargs)


@dataclass(frozen=True)
class CatalogCase:
    kind: str
    old: tuple[ClassSpec, ...]
    new: tuple[ClassSpec, ...]
    expected: frozenset[tuple[str, str]]
    coupled: frozenset[tuple[str, str]] = frozenset()


def _case(kind, old, new, expected, coupled=()):
    return CatalogCase(
        kind=kind,
        old=tuple(old),
        new=tuple(new),
        expected=frozenset(expected),
        coupled=frozenset(coupled),
    )


KEEP = method("keep")

CATALOG_CASES: list[CatalogCase] = [
    _case(
        "classRemoved",
        [cls("A", methods=(KEEP,))],
        [],
        {("classRemoved", "fix.A")},
    ),
    _case(
        "classNowFinal",
        [cls("A", methods=(KEEP,))],
        [cls("A", is_final=True, methods=(KEEP,))],
        {("classNowFinal", "fix.A")},
    ),
    _case(
        "classNowAbstract",
        [cls("A", methods=(KEEP,))],
        [cls("A", is_abstract=True, methods=(KEEP,))],
        {("classNowAbstract", "fix.A")},
    ),
    _case(
        "classLessAccessible",
        [cls("A", methods=(KEEP,))],
        [cls("A", visibility="package", methods=(KEEP,))],
        {("classLessAccessible", "fix.A")},
    ),
    _case(
        "classTypeChanged",
        [cls("A", methods=(KEEP,))],
        [cls("A", kind="interface")],
        {("classTypeChanged", "fix.A")},
    ),
    _case(
        "superclassRemoved",
        [cls("S"), cls("B", super_name="fix.S", methods=(KEEP,))],
        [cls("S"), cls("B", methods=(KEEP,))],
        {("superclassRemoved", "fix.B")},
    ),
    _case(
        "superclassAdded",
        [
            cls("S", is_abstract=True, methods=(method("m", is_abstract=True),)),
            cls("B", methods=(KEEP,)),
        ],
        [
            cls("S", is_abstract=True, methods=(method("m", is_abstract=True),)),
            cls("B", super_name="fix.S", methods=(KEEP,)),
        ],
        {("superclassAdded", "fix.B")},
        coupled={("methodAddedToPublicClass", "fix.B.m()V")},
    ),
    _case(
        "interfaceAdded",
        [cls("I", kind="interface"), cls("A", methods=(KEEP,))],
        [cls("I", kind="interface"), cls("A", interfaces=("fix.I",), methods=(KEEP,))],
        {("interfaceAdded", "fix.A")},
    ),
    _case(
        "interfaceRemoved",
        [cls("I", kind="interface"), cls("A", interfaces=("fix.I",), methods=(KEEP,))],
        [cls("I", kind="interface"), cls("A", methods=(KEEP,))],
        {("interfaceRemoved", "fix.A")},
    ),
    _case(
        "methodRemoved",
        [cls("A", methods=(method("m"), KEEP))],
        [cls("A", methods=(KEEP,))],
        {("methodRemoved", "fix.A.m()V")},
    ),
    _case(
        "methodNowAbstract",
        [cls("A", is_abstract=True, methods=(method("m"),))],
        [cls("A", is_abstract=True, methods=(method("m", is_abstract=True),))],
        {("methodNowAbstract", "fix.A.m()V")},
    ),
    _case(
        "methodNowFinal",
        [cls("A", methods=(method("m"),))],
        [cls("A", methods=(method("m", is_final=True),))],
        {("methodNowFinal", "fix.A.m()V")},
    ),
    _case(
        "methodNowStatic",
        [cls("A", methods=(method("m"),))],
        [cls("A", methods=(method("m", is_static=True),))],
        {("methodNowStatic", "fix.A.m()V")},
    ),
    _case(
        "methodNoLongerStatic",
        [cls("A", methods=(method("m", is_static=True),))],
        [cls("A", methods=(method("m"),))],
        {("methodNoLongerStatic", "fix.A.m()V")},
    ),
    _case(
        "methodLessAccessible",
        [cls("A", methods=(method("m"),))],
        [cls("A", methods=(method("m", visibility="protected"),))],
        {("methodLessAccessible", "fix.A.m()V")},
    ),
    _case(
        "methodReturnTypeChanged",
        [cls("A", methods=(method("m", "()I"),))],
        [cls("A", methods=(method("m", "()J"),))],
        {("methodReturnTypeChanged", "fix.A.m()I")},
    ),
    _case(
        "methodAddedToInterface",
        [cls("I", kind="interface", methods=(method("a", is_abstract=True),))],
        [
            cls(
                "I",
                kind="interface",
                methods=(method("a", is_abstract=True), method("b", is_abstract=True)),
            )
        ],
        {("methodAddedToInterface", "fix.I.b()V")},
    ),
    _case(
        "methodAbstractAddedToClass",
        [cls("A", is_abstract=True, methods=(KEEP,))],
        [cls("A", is_abstract=True, methods=(KEEP, method("m", is_abstract=True)))],
        {("methodAbstractAddedToClass", "fix.A.m()V")},
    ),
    _case(
        "methodAddedToPublicClass",
        [
            cls("S", visibility="package", is_abstract=True),
            cls("B", super_name="fix.S", methods=(KEEP,)),
        ],
        [
            cls(
                "S",
                visibility="package",
                is_abstract=True,
                methods=(method("m", is_abstract=True),),
            ),
            cls("B", super_name="fix.S", methods=(KEEP,)),
        ],
        {("methodAddedToPublicClass", "fix.B.m()V")},
    ),
    _case(
        "methodNewDefault",
        [cls("I", kind="interface", methods=(method("a", is_abstract=True),))],
        [
            cls(
                "I",
                kind="interface",
                methods=(method("a", is_abstract=True), method("d")),
            )
        ],
        {("methodNewDefault", "fix.I.d()V")},
    ),
    _case(
        "methodAbstractNowDefault",
        [cls("I", kind="interface", methods=(method("m", is_abstract=True),))],
        [cls("I", kind="interface", methods=(method("m"),))],
        {("methodAbstractNowDefault", "fix.I.m()V")},
    ),
    _case(
        "methodNowThrowsCheckedException",
        [cls("A", methods=(method("m"),))],
        [cls("A", methods=(method("m", exceptions=("java.io.IOException",)),))],
        {("methodNowThrowsCheckedException", "fix.A.m()V")},
    ),
    _case(
        "constructorRemoved",
        [cls("A", methods=(method("<init>"), method("<init>", "(I)V")))],
        [cls("A", methods=(method("<init>"),))],
        {("constructorRemoved", "fix.A.<init>(I)V")},
    ),
    _case(
        "constructorLessAccessible",
        [cls("A", methods=(method("<init>"),))],
        [cls("A", methods=(method("<init>", visibility="protected"),))],
        {("constructorLessAccessible", "fix.A.<init>()V")},
    ),
    _case(
        "fieldRemoved",
        [cls("A", fields=(field("f"), field("g")))],
        [cls("A", fields=(field("g"),))],
        {("fieldRemoved", "fix.A.f")},
    ),
    _case(
        "fieldNowFinal",
        [cls("A", fields=(field("f"),))],
        [cls("A", fields=(field("f", is_final=True),))],
        {("fieldNowFinal", "fix.A.f")},
    ),
    _case(
        "fieldNowStatic",
        [cls("A", fields=(field("f"),))],
        [cls("A", fields=(field("f", is_static=True),))],
        {("fieldNowStatic", "fix.A.f")},
    ),
    _case(
        "fieldNoLongerStatic",
        [cls("A", fields=(field("f", is_static=True),))],
        [cls("A", fields=(field("f"),))],
        {("fieldNoLongerStatic", "fix.A.f")},
    ),
    _case(
        "fieldLessAccessible",
        [cls("A", fields=(field("f"),))],
        [cls("A", fields=(field("f", visibility="protected"),))],
        {("fieldLessAccessible", "fix.A.f")},
    ),
    _case(
        "fieldTypeChanged",
        [cls("A", fields=(field("f", "I"),))],
        [cls("A", fields=(field("f", "J"),))],
        {("fieldTypeChanged", "fix.A.f")},
    ),
    _case(
        "fieldConstantValueChanged",
        [cls("A", fields=(field("f", is_static=True, is_final=True, constant=1),))],
        [cls("A", fields=(field("f", is_static=True, is_final=True, constant=2),))],
        {("fieldConstantValueChanged", "fix.A.f")},
    ),
]
