"""Semantic API model of one library version.

Builds typed declarations from parsed classes, labels every declaration as
stable or unstable per annotation and package-naming conventions, and
computes the exported API surface plus JVM-style member resolution tables.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

from .classfile import (
    ACC_ABSTRACT,
    ACC_ANNOTATION,
    ACC_ENUM,
    ACC_FINAL,
    ACC_INTERFACE,
    ACC_PRIVATE,
    ACC_PROTECTED,
    ACC_PUBLIC,
    ACC_STATIC,
    ACC_SYNTHETIC,
    JarContent,
    RawClass,
    RawMember,
)

VISIBILITY_RANK = {"private": 0, "package": 1, "protected": 2, "public": 3}

# Keywords that mark unstable declarations when found in annotation simple
# names (case-insensitive substring) or as whole package segments.
DEFAULT_KEYWORDS = (
    "api",
    "alpha",
    "beta",
    "internal",
    "protected",
    "private",
    "restricted",
    "experimental",
    "dev",
    "access",
)

# Annotation simple names known to mark unstable API, beyond keyword hits.
DEFAULT_ANNOTATIONS = (
    "Beta",
    "InterfaceAudience",
    "InternalApi",
    "Internal",
    "SdkInternalApi",
)


@dataclass(frozen=True)
class StabilityConfig:
    """Keyword and annotation lists driving stability classification."""

    keywords: tuple[str, ...] = DEFAULT_KEYWORDS
    annotations: tuple[str, ...] = DEFAULT_ANNOTATIONS

    @classmethod
    def load(cls, path: str | Path) -> "StabilityConfig":
        """Read a line-oriented config with [keywords] and [annotations] sections."""
        keywords: list[str] = []
        annotations: list[str] = []
        section = None
        for lineno, raw in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if line.startswith("[") and line.endswith("]"):
                section = line[1:-1].strip().lower()
                if section not in ("keywords", "annotations"):
                    raise ValueError(f"{path}:{lineno}: unknown section [{section}]")
                continue
            if section == "keywords":
                keywords.append(line.lower())
            elif section == "annotations":
                annotations.append(line)
            else:
                raise ValueError(f"{path}:{lineno}: entry outside any section")
        return cls(tuple(keywords), tuple(annotations))


@dataclass(frozen=True)
class StabilityLabel:
    status: str  # "stable" | "unstable"
    reason_kind: str = "none"  # none | annotation | package_convention | enclosing
    reason_value: str = ""

    @property
    def is_stable(self) -> bool:
        return self.status == "stable"


STABLE = StabilityLabel("stable")


@dataclass(frozen=True)
class MemberDecl:
    owner: str
    member_kind: str  # method | constructor | field
    name: str
    descriptor: str
    visibility: str
    is_abstract: bool = False
    is_final: bool = False
    is_static: bool = False
    is_default: bool = False
    declared_exceptions: tuple[str, ...] = ()
    annotations: tuple[str, ...] = ()

    @property
    def ref(self) -> str:
        if self.member_kind == "field":
            return f"{self.owner}.{self.name}"
        return f"{self.owner}.{self.name}{self.descriptor}"


@dataclass(frozen=True)
class TypeDecl:
    qualified_name: str
    kind: str  # class | interface | enum | annotation
    visibility: str
    is_abstract: bool
    is_final: bool
    is_static: bool
    super_name: str | None
    interface_names: tuple[str, ...]
    annotations: tuple[str, ...]
    members: tuple[MemberDecl, ...]
    package: str

    @property
    def enclosing_name(self) -> str | None:
        if "$" in self.qualified_name:
            return self.qualified_name.rsplit("$", 1)[0]
        return None


class EffectiveMember(NamedTuple):
    """A member visible on a host type, possibly inherited."""

    decl: MemberDecl
    host: str
    inherited_from: str | None


@dataclass
class ApiModel:
    """Immutable view of one library version's declarations."""

    id: str = ""
    types: dict[str, TypeDecl] = field(default_factory=dict)
    stability: dict[str, StabilityLabel] = field(default_factory=dict)
    constants: dict[str, int | float | str] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)
    _methods: dict[str, dict[tuple[str, str], EffectiveMember]] = field(default_factory=dict)
    _fields: dict[str, dict[str, EffectiveMember]] = field(default_factory=dict)

    def effective_methods(self, type_name: str) -> dict[tuple[str, str], EffectiveMember]:
        """Methods and constructors callable through ``type_name``, keyed by (name, descriptor)."""
        return self._methods.get(type_name, {})

    def effective_fields(self, type_name: str) -> dict[str, EffectiveMember]:
        return self._fields.get(type_name, {})

    def resolve_method(self, owner: str, name: str, descriptor: str) -> EffectiveMember | None:
        return self.effective_methods(owner).get((name, descriptor))

    def resolve_field(self, owner: str, name: str, descriptor: str) -> EffectiveMember | None:
        found = self.effective_fields(owner).get(name)
        if found is not None and found.decl.descriptor == descriptor:
            return found
        return None

    def superclass_chain(self, type_name: str) -> list[str]:
        """Superclass names above ``type_name``, excluding java.lang.Object.

        Walks inside the model; the first name outside the model terminates
        the chain (and is included, since its identity still matters).
        """
        chain: list[str] = []
        seen = {type_name}
        current = self.types.get(type_name)
        name = current.super_name if current else None
        while name and name != "java.lang.Object" and name not in seen:
            chain.append(name)
            seen.add(name)
            decl = self.types.get(name)
            name = decl.super_name if decl else None
        return chain

    def transitive_interfaces(self, type_name: str) -> set[str]:
        """All interface names reachable from ``type_name`` via supertypes."""
        result: set[str] = set()
        stack = [type_name]
        seen: set[str] = set()
        while stack:
            current = stack.pop()
            if current in seen:
                continue
            seen.add(current)
            decl = self.types.get(current)
            if decl is None:
                continue
            for iface in decl.interface_names:
                result.add(iface)
                stack.append(iface)
            if decl.super_name and decl.super_name != "java.lang.Object":
                stack.append(decl.super_name)
        return result


def _visibility(flags: int) -> str:
    if flags & ACC_PUBLIC:
        return "public"
    if flags & ACC_PROTECTED:
        return "protected"
    if flags & ACC_PRIVATE:
        return "private"
    return "package"


def _type_kind(flags: int) -> str:
    if flags & ACC_ANNOTATION:
        return "annotation"
    if flags & ACC_INTERFACE:
        return "interface"
    if flags & ACC_ENUM:
        return "enum"
    return "class"


def simple_annotation_name(qualified: str) -> str:
    return qualified.rsplit(".", 1)[-1].rsplit("$", 1)[-1]


def _annotation_label(annotations: Iterable[str], config: StabilityConfig) -> StabilityLabel | None:
    for qualified in annotations:
        simple = simple_annotation_name(qualified)
        lowered = simple.lower()
        if simple in config.annotations:
            return StabilityLabel("unstable", "annotation", simple)
        for keyword in config.keywords:
            if keyword in lowered:
                return StabilityLabel("unstable", "annotation", simple)
    return None


def _package_label(package: str, config: StabilityConfig) -> StabilityLabel | None:
    for segment in package.split("."):
        if segment.lower() in config.keywords:
            return StabilityLabel("unstable", "package_convention", segment.lower())
    return None


def classify_type_stability(
    decl: TypeDecl, config: StabilityConfig, enclosing: StabilityLabel | None = None
) -> StabilityLabel:
    """Label a type: own annotations, then package segments, then enclosure."""
    label = _annotation_label(decl.annotations, config)
    if label is not None:
        return label
    label = _package_label(decl.package, config)
    if label is not None:
        return label
    if enclosing is not None and not enclosing.is_stable:
        return StabilityLabel("unstable", "enclosing", decl.enclosing_name or "")
    return STABLE


def classify_member_stability(
    decl: MemberDecl, config: StabilityConfig, owner_label: StabilityLabel
) -> StabilityLabel:
    label = _annotation_label(decl.annotations, config)
    if label is not None:
        return label
    if not owner_label.is_stable:
        return StabilityLabel("unstable", "enclosing", decl.owner)
    return STABLE


def classify_stability(
    element: TypeDecl | MemberDecl,
    config: StabilityConfig | None = None,
    *,
    model: "ApiModel | None" = None,
) -> StabilityLabel:
    """Stability of a single declaration; uses ``model`` for enclosure lookups."""
    config = config or StabilityConfig()
    if isinstance(element, TypeDecl):
        enclosing = None
        if model is not None and element.enclosing_name:
            enclosing = model.stability.get(element.enclosing_name)
        return classify_type_stability(element, config, enclosing)
    owner_label = STABLE
    if model is not None:
        owner_label = model.stability.get(element.owner, STABLE)
    return classify_member_stability(element, config, owner_label)


def _member_decl(owner: RawClass, raw: RawMember) -> MemberDecl:
    if raw.is_method:
        kind = "constructor" if raw.name == "<init>" else "method"
    else:
        kind = "field"
    return MemberDecl(
        owner=owner.this_name,
        member_kind=kind,
        name=raw.name,
        descriptor=raw.descriptor,
        visibility=_visibility(raw.access_flags),
        is_abstract=bool(raw.access_flags & ACC_ABSTRACT),
        is_final=bool(raw.access_flags & ACC_FINAL),
        is_static=bool(raw.access_flags & ACC_STATIC),
        is_default=raw.is_default_method,
        declared_exceptions=raw.declared_exceptions,
        annotations=raw.annotations,
    )


def _type_decl(cls: RawClass) -> TypeDecl:
    name = cls.this_name
    package = name.rsplit(".", 1)[0] if "." in name else ""
    visibility = _visibility(cls.access_flags)
    is_static = False
    for record in cls.inner_class_records:
        if record.inner_name == name:
            # The InnerClasses attribute carries the true nested visibility.
            visibility = _visibility(record.access_flags)
            is_static = bool(record.access_flags & ACC_STATIC)
    members = tuple(
        _member_decl(cls, raw)
        for raw in (*cls.fields, *cls.methods)
        if raw.name != "<clinit>" and not raw.access_flags & ACC_SYNTHETIC
    )
    return TypeDecl(
        qualified_name=name,
        kind=_type_kind(cls.access_flags),
        visibility=visibility,
        is_abstract=bool(cls.access_flags & ACC_ABSTRACT),
        is_final=bool(cls.access_flags & ACC_FINAL),
        is_static=is_static,
        super_name=cls.super_name,
        interface_names=cls.interfaces,
        annotations=cls.annotations,
        members=members,
        package=package,
    )


def _collect_effective(
    model: ApiModel,
    type_name: str,
    methods_out: dict[str, dict[tuple[str, str], EffectiveMember]],
    fields_out: dict[str, dict[str, EffectiveMember]],
    in_progress: set[str],
) -> tuple[dict[tuple[str, str], EffectiveMember], dict[str, EffectiveMember]]:
    if type_name in methods_out:
        return methods_out[type_name], fields_out[type_name]
    decl = model.types.get(type_name)
    methods: dict[tuple[str, str], EffectiveMember] = {}
    fields: dict[str, EffectiveMember] = {}
    if decl is None or type_name in in_progress:  # unknown type or hierarchy cycle
        return methods, fields
    in_progress.add(type_name)

    for member in decl.members:
        if member.member_kind == "field":
            fields[member.name] = EffectiveMember(member, type_name, None)
        else:
            methods[(member.name, member.descriptor)] = EffectiveMember(member, type_name, None)

    supertypes: list[str] = []
    if decl.super_name:
        supertypes.append(decl.super_name)
    supertypes.extend(decl.interface_names)
    for parent in supertypes:
        parent_methods, parent_fields = _collect_effective(
            model, parent, methods_out, fields_out, in_progress
        )
        for key, eff in parent_methods.items():
            inner = eff.decl
            if inner.member_kind == "constructor" or inner.visibility == "private":
                continue  # constructors and private members are not inherited
            declaring = model.types.get(inner.owner)
            if inner.is_static and declaring is not None and declaring.kind in (
                "interface",
                "annotation",
            ):
                continue  # static interface methods are not inherited
            methods.setdefault(key, EffectiveMember(inner, type_name, inner.owner))
        for key, eff in parent_fields.items():
            if eff.decl.visibility == "private":
                continue
            fields.setdefault(key, EffectiveMember(eff.decl, type_name, eff.decl.owner))

    in_progress.discard(type_name)
    methods_out[type_name] = methods
    fields_out[type_name] = fields
    return methods, fields


def build_model(
    jar: JarContent,
    config: StabilityConfig | None = None,
    model_id: str | None = None,
) -> ApiModel:
    """Build an ApiModel from parsed JAR content.

    Duplicate type names keep the first occurrence and record a diagnostic.
    Synthetic classes are skipped. Stability is computed for every type and
    member, so the stability map is total.
    """
    config = config or StabilityConfig()
    model = ApiModel(id=model_id if model_id is not None else jar.source)

    for path, cls in jar.entries:
        if cls.access_flags & ACC_SYNTHETIC:
            continue
        if cls.this_name in model.types:
            model.diagnostics.append(f"duplicate type {cls.this_name} at {path}; keeping first")
            continue
        model.types[cls.this_name] = _type_decl(cls)
        for raw in cls.fields:
            if raw.constant_value is not None:
                model.constants[f"{cls.this_name}.{raw.name}"] = raw.constant_value

    # Outer types label before nested ones: sort by name length of the '$' chain.
    for name in sorted(model.types, key=lambda n: (n.count("$"), n)):
        decl = model.types[name]
        enclosing_label = None
        if decl.enclosing_name:
            enclosing_label = model.stability.get(decl.enclosing_name)
        type_label = classify_type_stability(decl, config, enclosing_label)
        model.stability[name] = type_label
        for member in decl.members:
            model.stability[member.ref] = classify_member_stability(member, config, type_label)

    in_progress: set[str] = set()
    for name in model.types:
        _collect_effective(model, name, model._methods, model._fields, in_progress)
    return model


def type_accessible(model: ApiModel, type_name: str) -> bool:
    """True when a client outside the package can name the type at all."""
    decl = model.types.get(type_name)
    if decl is None:
        return False
    if decl.visibility not in ("public", "protected"):
        return False
    enclosing = decl.enclosing_name
    if enclosing is None:
        return True
    return type_accessible(model, enclosing)


def api_surface(model: ApiModel) -> frozenset[str]:
    """Element references exported to external clients per JLS access rules."""
    surface: set[str] = set()
    for name, decl in model.types.items():
        if not type_accessible(model, name):
            continue
        surface.add(name)
        for member in decl.members:
            if member.visibility in ("public", "protected"):
                surface.add(member.ref)
    return frozenset(surface)


def owner_of(ref: str) -> str:
    """Owner type of a member reference (identity for type references)."""
    head = ref.split("(", 1)[0]
    if "." not in head:
        return head
    owner, _, last = head.rpartition(".")
    # A type ref has no member part; detect by capitalization convention is
    # unreliable, so callers pass member refs here. '<init>' and descriptors
    # only occur in member refs.
    return owner if owner else last


def member_ref(owner: str, name: str, descriptor: str) -> str:
    if descriptor.startswith("("):
        return f"{owner}.{name}{descriptor}"
    return f"{owner}.{name}"
