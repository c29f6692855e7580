"""JAR and class-file reading, plus the synthetic fixture writer."""

from .descriptors import (
    DescriptorError,
    class_names_in,
    element_class_name,
    parameter_part,
    parse_method_descriptor,
    validate_descriptor,
)
from .model import (
    ACC_ABSTRACT,
    ACC_ANNOTATION,
    ACC_ENUM,
    ACC_FINAL,
    ACC_INTERFACE,
    ACC_NATIVE,
    ACC_PRIVATE,
    ACC_PROTECTED,
    ACC_PUBLIC,
    ACC_STATIC,
    ACC_STRICT,
    ACC_SYNTHETIC,
    BadMagic,
    ClassFormatError,
    InnerClassRecord,
    JarContent,
    MalformedConstantPool,
    MemberRef,
    NotAZip,
    RawClass,
    RawMember,
    TruncatedClass,
    UnknownVersion,
    UnsupportedConstruct,
    java_release_of,
    language_of_source,
)
from .parser import open_jar, parse_class
from .writer import AUTO_SOURCE, ClassSpec, FieldSpec, MethodSpec, write_class

__all__ = [
    "ACC_ABSTRACT",
    "ACC_ANNOTATION",
    "ACC_ENUM",
    "ACC_FINAL",
    "ACC_INTERFACE",
    "ACC_NATIVE",
    "ACC_PRIVATE",
    "ACC_PROTECTED",
    "ACC_PUBLIC",
    "ACC_STATIC",
    "ACC_STRICT",
    "ACC_SYNTHETIC",
    "AUTO_SOURCE",
    "BadMagic",
    "ClassFormatError",
    "ClassSpec",
    "DescriptorError",
    "FieldSpec",
    "InnerClassRecord",
    "JarContent",
    "MalformedConstantPool",
    "MemberRef",
    "MethodSpec",
    "NotAZip",
    "RawClass",
    "RawMember",
    "TruncatedClass",
    "UnknownVersion",
    "UnsupportedConstruct",
    "class_names_in",
    "element_class_name",
    "java_release_of",
    "language_of_source",
    "open_jar",
    "parameter_part",
    "parse_class",
    "parse_method_descriptor",
    "validate_descriptor",
    "write_class",
]
