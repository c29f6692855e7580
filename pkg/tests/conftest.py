"""Shared fixture builders: in-memory JARs assembled from class specs."""

from __future__ import annotations

import io
import zipfile
from pathlib import Path

import pytest

from jarcompat.apimodel import ApiModel, StabilityConfig, build_model
from jarcompat.classfile import ClassSpec, JarContent, open_jar, write_class


def jar_bytes(specs: list[ClassSpec], extra: dict[str, bytes] | None = None) -> bytes:
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_STORED) as archive:
        for spec in specs:
            archive.writestr(spec.name.replace(".", "/") + ".class", write_class(spec))
        for name, data in (extra or {}).items():
            archive.writestr(name, data)
    return buffer.getvalue()


def jar_content(specs: list[ClassSpec], extra: dict[str, bytes] | None = None) -> JarContent:
    return open_jar(io.BytesIO(jar_bytes(specs, extra)))


def write_jar(path: Path, specs: list[ClassSpec], extra: dict[str, bytes] | None = None) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(jar_bytes(specs, extra))
    return path


def model_of(
    specs: list[ClassSpec],
    config: StabilityConfig | None = None,
    model_id: str = "fixture",
) -> ApiModel:
    return build_model(jar_content(specs), config, model_id=model_id)


@pytest.fixture
def make_jar(tmp_path):
    counter = {"n": 0}

    def _make(specs: list[ClassSpec], name: str | None = None) -> Path:
        counter["n"] += 1
        target = tmp_path / (name or f"fixture{counter['n']}.jar")
        return write_jar(target, specs)

    return _make
