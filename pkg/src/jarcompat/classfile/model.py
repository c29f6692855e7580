"""Raw structural records produced by the class-file parser.

Everything downstream of this package works on symbolic names and
descriptors; constant-pool indices never escape the parser.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple


class ClassFormatError(Exception):
    """A class file that cannot be decoded into a RawClass."""


class BadMagic(ClassFormatError):
    """First four bytes are not 0xCAFEBABE."""


class TruncatedClass(ClassFormatError):
    """Input ended before the structure it promised."""


class MalformedConstantPool(ClassFormatError):
    """Constant pool entry with a bad tag, index, or encoding."""


class NotAZip(Exception):
    """The given archive is not a readable ZIP file."""


class UnknownVersion(ValueError):
    """Class-file major version below the JVM's first release (45)."""


class UnsupportedConstruct(ValueError):
    """Fixture writer asked for something outside the supported subset."""


# Access flags (classes and members share the namespace).
ACC_PUBLIC = 0x0001
ACC_PRIVATE = 0x0002
ACC_PROTECTED = 0x0004
ACC_STATIC = 0x0008
ACC_FINAL = 0x0010
ACC_SUPER = 0x0020
ACC_SYNCHRONIZED = 0x0020
ACC_VOLATILE = 0x0040
ACC_BRIDGE = 0x0040
ACC_TRANSIENT = 0x0080
ACC_VARARGS = 0x0080
ACC_NATIVE = 0x0100
ACC_INTERFACE = 0x0200
ACC_ABSTRACT = 0x0400
ACC_STRICT = 0x0800
ACC_SYNTHETIC = 0x1000
ACC_ANNOTATION = 0x2000
ACC_ENUM = 0x4000

MAGIC = 0xCAFEBABE
MIN_MAJOR_VERSION = 45

# SourceFile extension -> language tag. Anything else (including a missing
# SourceFile attribute) maps to "unknown".
LANGUAGE_BY_EXTENSION = {
    ".java": "java",
    ".scala": "scala",
    ".kt": "kotlin",
    ".kts": "kotlin",
    ".groovy": "groovy",
    ".clj": "clojure",
}


def language_of_source(source_file: str | None) -> str:
    if source_file is None:
        return "unknown"
    dot = source_file.rfind(".")
    if dot < 0:
        return "unknown"
    return LANGUAGE_BY_EXTENSION.get(source_file[dot:].lower(), "unknown")


def java_release_of(major_version: int) -> int:
    """Map a class-file major version to its Java release number.

    45 -> 1 (JDK 1.1), 52 -> 8, 53 -> 9, and so on (major - 44).
    """
    if major_version < MIN_MAJOR_VERSION:
        raise UnknownVersion(f"class-file major version {major_version} predates the JVM")
    return major_version - 44


class MemberRef(NamedTuple):
    """A symbolic reference to a field or method of some type."""

    owner: str
    name: str
    descriptor: str


class InnerClassRecord(NamedTuple):
    """One row of the InnerClasses attribute, names resolved."""

    inner_name: str
    outer_name: str | None
    simple_name: str | None
    access_flags: int


@dataclass(frozen=True)
class RawMember:
    """A field or method as declared in the class file."""

    name: str
    descriptor: str
    access_flags: int
    annotations: tuple[str, ...] = ()
    is_default_method: bool = False
    constant_value: int | float | str | None = None
    declared_exceptions: tuple[str, ...] = ()
    # References extracted from the Code attribute, if any. Bodies are only
    # scanned for refs; instructions are never interpreted.
    invoked_methods: tuple[MemberRef, ...] = ()
    accessed_fields: tuple[MemberRef, ...] = ()
    referenced_types: tuple[str, ...] = ()

    @property
    def is_method(self) -> bool:
        return "(" in self.descriptor


@dataclass(frozen=True)
class RawClass:
    """A parsed class file with all constant-pool indices resolved away."""

    magic: int
    major_version: int
    minor_version: int
    access_flags: int
    this_name: str
    super_name: str | None
    interfaces: tuple[str, ...]
    fields: tuple[RawMember, ...]
    methods: tuple[RawMember, ...]
    source_file: str | None = None
    annotations: tuple[str, ...] = ()
    inner_class_records: tuple[InnerClassRecord, ...] = ()

    @property
    def is_interface(self) -> bool:
        return bool(self.access_flags & ACC_INTERFACE)

    @property
    def language(self) -> str:
        return language_of_source(self.source_file)


@dataclass
class JarContent:
    """All successfully parsed classes of one JAR plus archive-level facts."""

    entries: list[tuple[str, RawClass]] = field(default_factory=list)
    non_class_entries: int = 0
    detected_languages: set[str] = field(default_factory=set)
    parse_failures: list[tuple[str, str]] = field(default_factory=list)
    source: str = ""

    def classes(self) -> list[RawClass]:
        return [cls for _, cls in self.entries]

    def max_java_release(self) -> int | None:
        majors = [cls.major_version for cls in self.classes()]
        if not majors:
            return None
        return java_release_of(max(majors))
