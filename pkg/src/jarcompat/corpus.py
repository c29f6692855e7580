"""Corpus derivation: dependency graph, upgrade selection, and the pipeline.

The graph lives in two CSV files. ``artifacts.csv`` has the header
``group,artifact,version,release_date,packaging,jar_path`` (ISO-8601 dates,
jar_path optional and resolved against a JAR root). ``edges.csv`` has
``kind,scope,from,to`` where kind is DEPENDS or NEXT, scope qualifies
DEPENDS edges, and from/to are ``group:artifact:version`` coordinates.

Upgrade candidates are pairs of semver-compliant versions adjacent along
NEXT edges after skipping non-compliant intermediates. NEXT order is
trusted over release dates so maintenance releases stay on their branch;
the release-date filter only rejects inverted dates inside an emitted pair.
Every candidate is either emitted or carries exactly one exclusion reason,
so the accounting reconciles.
"""

from __future__ import annotations

import csv
import hashlib
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from datetime import datetime
from pathlib import Path

from .apimodel import StabilityConfig, build_model
from .classfile import NotAZip, open_jar
from .delta import Delta, compute_delta, is_breaking
from .detect import classify_impact, compute_detections
from .semver import NotAnUpgrade, SemverLevel, Unparseable, Version, classify_upgrade, parse_version
from .stats import cochran_sample
from .usage import extract_usage

DEPENDS_SCOPES = ("compile", "test", "provided", "runtime", "system")
CLIENT_SCOPES = ("compile", "test")

# Pair-level exclusion reasons, in the order filters run.
EXCLUSION_REASONS = (
    "not_an_upgrade",
    "no_external_client",
    "packaging_not_jar",
    "jar_unavailable",
    "unreadable_jar",
    "non_java_language",
    "invalid_java_version",
    "release_date_inversion",
)


class SchemaError(ValueError):
    """Graph file violates the documented schema."""


@dataclass(frozen=True)
class ArtifactRecord:
    group_id: str
    artifact_id: str
    version: str
    release_date: datetime
    packaging: str
    jar_path: str | None

    @property
    def coord(self) -> str:
        return f"{self.group_id}:{self.artifact_id}:{self.version}"

    @property
    def library(self) -> tuple[str, str]:
        return (self.group_id, self.artifact_id)


@dataclass(frozen=True)
class GraphEdge:
    kind: str  # DEPENDS | NEXT
    scope: str | None
    src: str
    dst: str


@dataclass
class DependencyGraph:
    artifacts: dict[str, ArtifactRecord] = field(default_factory=dict)
    next_out: dict[str, list[str]] = field(default_factory=dict)
    dependents: dict[str, list[GraphEdge]] = field(default_factory=dict)
    diagnostics: list[str] = field(default_factory=list)

    def versions_of(self, library: tuple[str, str]) -> list[ArtifactRecord]:
        return [a for a in self.artifacts.values() if a.library == library]


@dataclass
class Upgrade:
    group_id: str
    artifact_id: str
    v1: Version
    v2: Version
    level: SemverLevel | None = None
    delta: Delta | None = None
    exclusion_reason: str | None = None

    @property
    def library(self) -> tuple[str, str]:
        return (self.group_id, self.artifact_id)

    @property
    def v1_coord(self) -> str:
        return f"{self.group_id}:{self.artifact_id}:{self.v1.raw}"

    @property
    def v2_coord(self) -> str:
        return f"{self.group_id}:{self.artifact_id}:{self.v2.raw}"


@dataclass(frozen=True)
class ClientRef:
    group_id: str
    artifact_id: str
    version: str
    depended_version: str  # coordinate of the library v1
    scope: str

    @property
    def coord(self) -> str:
        return f"{self.group_id}:{self.artifact_id}:{self.version}"


@dataclass
class CorpusDerivation:
    upgrades: list[Upgrade] = field(default_factory=list)
    excluded: list[Upgrade] = field(default_factory=list)
    skipped_versions: list[tuple[str, str]] = field(default_factory=list)  # (coord, reason)

    @property
    def candidate_count(self) -> int:
        return len(self.upgrades) + len(self.excluded)


def _parse_date(text: str, where: str) -> datetime:
    try:
        return datetime.fromisoformat(text)
    except ValueError as exc:
        raise SchemaError(f"{where}: bad release_date {text!r}") from exc


def load_graph(artifacts_path: str | Path, edges_path: str | Path) -> DependencyGraph:
    """Load the two-file graph; duplicate coordinates and bad rows are fatal,
    dangling edges become diagnostics."""
    graph = DependencyGraph()

    with open(artifacts_path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        expected = ["group", "artifact", "version", "release_date", "packaging", "jar_path"]
        if header != expected:
            raise SchemaError(f"{artifacts_path}:1: header must be {','.join(expected)}")
        for lineno, row in enumerate(reader, 2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != 6:
                raise SchemaError(f"{artifacts_path}:{lineno}: expected 6 columns, got {len(row)}")
            group, artifact, version, date, packaging, jar_path = (cell.strip() for cell in row)
            record = ArtifactRecord(
                group_id=group,
                artifact_id=artifact,
                version=version,
                release_date=_parse_date(date, f"{artifacts_path}:{lineno}"),
                packaging=packaging or "jar",
                jar_path=jar_path or None,
            )
            if record.coord in graph.artifacts:
                raise SchemaError(f"{artifacts_path}:{lineno}: duplicate coordinates {record.coord}")
            graph.artifacts[record.coord] = record

    with open(edges_path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader, None)
        if header != ["kind", "scope", "from", "to"]:
            raise SchemaError(f"{edges_path}:1: header must be kind,scope,from,to")
        for lineno, row in enumerate(reader, 2):
            if not row or not any(cell.strip() for cell in row):
                continue
            if len(row) != 4:
                raise SchemaError(f"{edges_path}:{lineno}: expected 4 columns, got {len(row)}")
            kind, scope, src, dst = (cell.strip() for cell in row)
            if kind not in ("DEPENDS", "NEXT"):
                raise SchemaError(f"{edges_path}:{lineno}: unknown edge kind {kind!r}")
            if kind == "DEPENDS" and scope not in DEPENDS_SCOPES:
                raise SchemaError(f"{edges_path}:{lineno}: unknown scope {scope!r}")
            if src not in graph.artifacts or dst not in graph.artifacts:
                graph.diagnostics.append(f"{edges_path}:{lineno}: dangling edge {src} -> {dst}")
                continue
            edge = GraphEdge(kind=kind, scope=scope or None, src=src, dst=dst)
            if kind == "NEXT":
                if graph.artifacts[src].library != graph.artifacts[dst].library:
                    raise SchemaError(
                        f"{edges_path}:{lineno}: NEXT edge across different libraries"
                    )
                graph.next_out.setdefault(src, []).append(dst)
            else:
                graph.dependents.setdefault(dst, []).append(edge)

    return graph


@dataclass
class _JarFacts:
    ok: bool
    reason: str | None = None
    languages: frozenset[str] = frozenset()
    max_release: int | None = None


class _JarProbe:
    """Caches per-artifact JAR facts needed by the selection filters."""

    def __init__(self, jar_root: Path | None) -> None:
        self.jar_root = jar_root
        self.cache: dict[str, _JarFacts] = {}

    def resolve(self, record: ArtifactRecord) -> Path | None:
        if record.jar_path is None:
            return None
        path = Path(record.jar_path)
        if not path.is_absolute() and self.jar_root is not None:
            path = self.jar_root / path
        return path

    def facts(self, record: ArtifactRecord) -> _JarFacts:
        cached = self.cache.get(record.coord)
        if cached is not None:
            return cached
        path = self.resolve(record)
        if path is None or not path.exists():
            facts = _JarFacts(ok=False, reason="jar_unavailable")
        else:
            try:
                content = open_jar(path)
            except NotAZip:
                facts = _JarFacts(ok=False, reason="unreadable_jar")
            else:
                facts = _JarFacts(
                    ok=True,
                    languages=frozenset(content.detected_languages),
                    max_release=content.max_java_release(),
                )
        self.cache[record.coord] = facts
        return facts


def _chains(graph: DependencyGraph, library: tuple[str, str]) -> list[list[ArtifactRecord]]:
    """Maximal NEXT paths for one library, one per root (plus one per branch)."""
    versions = {a.coord: a for a in graph.versions_of(library)}
    successors = {
        coord: sorted(d for d in graph.next_out.get(coord, []) if d in versions)
        for coord in versions
    }
    has_predecessor = {d for dsts in successors.values() for d in dsts}
    roots = sorted(coord for coord in versions if coord not in has_predecessor)
    if not roots and versions:  # pure cycle; break it at the smallest coord
        roots = [min(versions)]

    chains: list[list[ArtifactRecord]] = []
    pending: list[tuple[str, list[ArtifactRecord], set[str]]] = [
        (root, [], set()) for root in roots
    ]
    while pending:
        start, prefix, seen = pending.pop()
        # A branched history (maintenance release) walks each branch as a
        # full path including the shared prefix, so pairs across the branch
        # point are not lost; duplicates are removed downstream.
        chain = list(prefix) + [versions[start]]
        seen = set(seen) | {start}
        current = start
        while True:
            nexts = [n for n in successors.get(current, []) if n not in seen]
            if not nexts:
                break
            for extra in nexts[1:]:
                pending.append((extra, list(chain), set(seen)))
            current = nexts[0]
            seen.add(current)
            chain.append(versions[current])
        chains.append(chain)
    return sorted(chains, key=lambda c: c[0].coord)


def _external_clients(graph: DependencyGraph, record: ArtifactRecord) -> list[GraphEdge]:
    clients = []
    for edge in graph.dependents.get(record.coord, []):
        if edge.scope not in CLIENT_SCOPES:
            continue
        client = graph.artifacts[edge.src]
        if client.group_id != record.group_id:
            clients.append(edge)
    return clients


def derive_upgrades(graph: DependencyGraph, jar_root: str | Path | None = None) -> CorpusDerivation:
    """Apply the selection filters and return emitted plus excluded candidates.

    Versions that are qualified, date-like, or unparseable never become
    candidate endpoints; they are recorded in ``skipped_versions`` and
    skipped when pairing neighbours.
    """
    probe = _JarProbe(Path(jar_root) if jar_root is not None else None)
    derivation = CorpusDerivation()
    libraries = sorted({a.library for a in graph.artifacts.values()})
    seen_pairs: set[tuple[str, str]] = set()
    seen_skips: set[str] = set()

    for library in libraries:
        for chain in _chains(graph, library):
            compliant: list[tuple[ArtifactRecord, Version]] = []
            for record in chain:
                try:
                    version = parse_version(record.version)
                except Unparseable:
                    if record.coord not in seen_skips:
                        seen_skips.add(record.coord)
                        derivation.skipped_versions.append((record.coord, "unparseable"))
                    continue
                if not version.compliant:
                    if record.coord not in seen_skips:
                        seen_skips.add(record.coord)
                        derivation.skipped_versions.append(
                            (record.coord, version.noncompliance_reason or "non_compliant")
                        )
                    continue
                compliant.append((record, version))

            for (rec1, v1), (rec2, v2) in zip(compliant, compliant[1:]):
                if (rec1.coord, rec2.coord) in seen_pairs:
                    continue
                seen_pairs.add((rec1.coord, rec2.coord))
                upgrade = Upgrade(
                    group_id=rec1.group_id, artifact_id=rec1.artifact_id, v1=v1, v2=v2
                )
                reason = _first_exclusion(graph, probe, rec1, rec2, v1, v2, upgrade)
                if reason is None:
                    derivation.upgrades.append(upgrade)
                else:
                    upgrade.exclusion_reason = reason
                    derivation.excluded.append(upgrade)
    return derivation


def _first_exclusion(
    graph: DependencyGraph,
    probe: _JarProbe,
    rec1: ArtifactRecord,
    rec2: ArtifactRecord,
    v1: Version,
    v2: Version,
    upgrade: Upgrade,
) -> str | None:
    try:
        upgrade.level = classify_upgrade(v1, v2)
    except NotAnUpgrade:
        return "not_an_upgrade"
    if not _external_clients(graph, rec1):
        return "no_external_client"
    if rec1.packaging != "jar" or rec2.packaging != "jar":
        return "packaging_not_jar"
    facts1 = probe.facts(rec1)
    facts2 = probe.facts(rec2)
    for facts in (facts1, facts2):
        if not facts.ok:
            return facts.reason
    for facts in (facts1, facts2):
        if any(tag not in ("java", "unknown") for tag in facts.languages):
            return "non_java_language"
    for facts in (facts1, facts2):
        if facts.max_release is not None and facts.max_release > 8:
            return "invalid_java_version"
    if rec1.release_date > rec2.release_date:
        return "release_date_inversion"
    return None


def derive_clients(upgrade: Upgrade, graph: DependencyGraph) -> list[ClientRef]:
    """External compile/test clients of v1, one (latest) version per client."""
    rec1 = graph.artifacts.get(upgrade.v1_coord)
    if rec1 is None:
        return []
    chain_pos = _chain_positions(graph)
    best: dict[tuple[str, str], tuple[tuple, ClientRef]] = {}
    for edge in _external_clients(graph, rec1):
        client = graph.artifacts[edge.src]
        ref = ClientRef(
            group_id=client.group_id,
            artifact_id=client.artifact_id,
            version=client.version,
            depended_version=rec1.coord,
            scope=edge.scope or "compile",
        )
        rank = (
            chain_pos.get(client.coord, -1),
            client.release_date,
            client.version,
        )
        key = client.library
        if key not in best or rank > best[key][0]:
            best[key] = (rank, ref)
    return [ref for _, ref in sorted(best.values(), key=lambda item: item[1].coord)]


def _chain_positions(graph: DependencyGraph) -> dict[str, int]:
    positions: dict[str, int] = {}
    for library in {a.library for a in graph.artifacts.values()}:
        for chain in _chains(graph, library):
            for index, record in enumerate(chain):
                positions[record.coord] = index
    return positions


# --- pipeline ---------------------------------------------------------------


@dataclass
class PipelineOptions:
    scope: str = "stable"
    jobs: int = 1
    seed: int = 0
    samples: tuple[tuple[str, float, float], ...] = ()  # (level|"all", confidence, margin)
    stability_config: StabilityConfig | None = None


def _hash_jars(*paths: Path) -> str:
    digest = hashlib.sha256()
    for path in paths:
        digest.update(path.read_bytes())
    return digest.hexdigest()


def _delta_filename(upgrade: Upgrade) -> str:
    return (
        f"{upgrade.group_id}__{upgrade.artifact_id}__{upgrade.v1.raw}__{upgrade.v2.raw}.json"
    ).replace("/", "_")


def _compute_delta_job(
    v1_path: str, v2_path: str, v1_coord: str, v2_coord: str, config: StabilityConfig
) -> dict:
    old_model = build_model(open_jar(v1_path), config, model_id=v1_coord)
    new_model = build_model(open_jar(v2_path), config, model_id=v2_coord)
    return compute_delta(old_model, new_model).to_dict()


def run_pipeline(
    graph: DependencyGraph,
    jar_root: str | Path | None,
    out_dir: str | Path,
    options: PipelineOptions | None = None,
) -> dict:
    """Derive upgrades, compute deltas and detections, and write the datasets.

    Outputs are deterministic for fixed inputs; per-upgrade delta files are
    keyed by a content hash of the two JARs and reused when already present.
    Returns a summary dict (also written to summary.json).
    """
    options = options or PipelineOptions()
    config = options.stability_config or StabilityConfig()
    out = Path(out_dir)
    (out / "deltas").mkdir(parents=True, exist_ok=True)
    probe = _JarProbe(Path(jar_root) if jar_root is not None else None)

    derivation = derive_upgrades(graph, jar_root)

    # Delta computation (parallel across upgrades, resumable via input hash).
    jobs: list[tuple[Upgrade, Path, Path, Path, str]] = []
    for upgrade in derivation.upgrades:
        rec1 = graph.artifacts[upgrade.v1_coord]
        rec2 = graph.artifacts[upgrade.v2_coord]
        v1_path = probe.resolve(rec1)
        v2_path = probe.resolve(rec2)
        assert v1_path is not None and v2_path is not None  # filtered earlier
        delta_path = out / "deltas" / _delta_filename(upgrade)
        jobs.append((upgrade, v1_path, v2_path, delta_path, _hash_jars(v1_path, v2_path)))

    pending = []
    for upgrade, v1_path, v2_path, delta_path, input_hash in jobs:
        if delta_path.exists():
            payload = json.loads(delta_path.read_text(encoding="utf-8"))
            if payload.get("inputHash") == input_hash:
                upgrade.delta = Delta.from_dict(payload)
                continue
        pending.append((upgrade, v1_path, v2_path, delta_path, input_hash))

    def _finish(upgrade: Upgrade, payload: dict, delta_path: Path, input_hash: str) -> None:
        payload = dict(payload)
        payload["inputHash"] = input_hash
        delta_path.write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        upgrade.delta = Delta.from_dict(payload)

    if options.jobs > 1 and len(pending) > 1:
        with ProcessPoolExecutor(max_workers=options.jobs) as pool:
            payloads = list(
                pool.map(
                    _compute_delta_job,
                    [str(j[1]) for j in pending],
                    [str(j[2]) for j in pending],
                    [j[0].v1_coord for j in pending],
                    [j[0].v2_coord for j in pending],
                    [config] * len(pending),
                )
            )
        for (upgrade, _, _, delta_path, input_hash), payload in zip(pending, payloads):
            _finish(upgrade, payload, delta_path, input_hash)
    else:
        for upgrade, v1_path, v2_path, delta_path, input_hash in pending:
            payload = _compute_delta_job(
                str(v1_path), str(v2_path), upgrade.v1_coord, upgrade.v2_coord, config
            )
            _finish(upgrade, payload, delta_path, input_hash)

    # Clients and detections.
    client_rows: list[dict] = []
    detection_rows: list[dict] = []
    for upgrade in derivation.upgrades:
        assert upgrade.delta is not None
        rec1 = graph.artifacts[upgrade.v1_coord]
        old_model = None
        for client in derive_clients(upgrade, graph):
            client_record = graph.artifacts[client.coord]
            client_jar = probe.resolve(client_record)
            broken = None
            detections_count = 0
            if client_jar is not None and client_jar.exists():
                if old_model is None:
                    old_model = build_model(
                        open_jar(probe.resolve(rec1)), config, model_id=upgrade.v1_coord
                    )
                usage = extract_usage(open_jar(client_jar), old_model)
                detections = compute_detections(upgrade.delta, usage)
                summary = classify_impact(upgrade.delta, usage, detections)
                broken = summary.broken
                detections_count = summary.detection_count
                for detection in detections:
                    stability = _stability_of(upgrade.delta, detection.library_element, detection.bc_kind.value)
                    detection_rows.append(
                        {
                            "library": f"{upgrade.group_id}:{upgrade.artifact_id}",
                            "v1": upgrade.v1.raw,
                            "v2": upgrade.v2.raw,
                            "client": client.coord,
                            "clientElement": detection.client_element,
                            "libraryElement": detection.library_element,
                            "useKind": detection.use_kind.value,
                            "bcKind": detection.bc_kind.value,
                            "confidence": detection.confidence,
                            "stability": stability,
                        }
                    )
            client_rows.append(
                {
                    "client": client.coord,
                    "scope": client.scope,
                    "library": f"{upgrade.group_id}:{upgrade.artifact_id}",
                    "v1": upgrade.v1.raw,
                    "v2": upgrade.v2.raw,
                    "level": upgrade.level.value if upgrade.level else "",
                    "broken": "" if broken is None else str(broken).lower(),
                    "detections": detections_count,
                }
            )

    _write_outputs(out, graph, derivation, client_rows, detection_rows)
    summary = _summarize(derivation, client_rows, detection_rows, options)
    (out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if options.samples:
        _write_samples(out, client_rows, options)
    return summary


def _stability_of(delta: Delta, element: str, kind: str) -> str:
    for change in delta.changes:
        if change.element == element and change.kind.value == kind:
            return change.stability.status
    return ""


def _write_csv(path: Path, header: list[str], rows: list[list]) -> None:
    with open(path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)


def _write_outputs(
    out: Path,
    graph: DependencyGraph,
    derivation: CorpusDerivation,
    client_rows: list[dict],
    detection_rows: list[dict],
) -> None:
    upgrade_rows = []
    for upgrade in sorted(
        derivation.upgrades, key=lambda u: (u.group_id, u.artifact_id, u.v1.key(), u.v2.key())
    ):
        assert upgrade.delta is not None and upgrade.level is not None
        rec2 = graph.artifacts[upgrade.v2_coord]
        upgrade_rows.append(
            [
                upgrade.group_id,
                upgrade.artifact_id,
                upgrade.v1.raw,
                upgrade.v2.raw,
                upgrade.level.value,
                rec2.release_date.year,
                str(is_breaking(upgrade.delta, "stable")).lower(),
                str(is_breaking(upgrade.delta, "all")).lower(),
                len(upgrade.delta.changes),
                sum(1 for c in upgrade.delta.changes if c.stability.is_stable),
                f"deltas/{_delta_filename(upgrade)}",
            ]
        )
    _write_csv(
        out / "upgrades.csv",
        [
            "group", "artifact", "v1", "v2", "level", "year",
            "breaking", "breaking_any", "bc_count", "bc_count_stable", "delta_file",
        ],
        upgrade_rows,
    )

    exclusion_rows = [
        ["version", coord, "", reason]
        for coord, reason in sorted(derivation.skipped_versions)
    ]
    exclusion_rows += [
        ["pair", upgrade.v1_coord, upgrade.v2_coord, upgrade.exclusion_reason or ""]
        for upgrade in sorted(
            derivation.excluded, key=lambda u: (u.group_id, u.artifact_id, u.v1.raw, u.v2.raw)
        )
    ]
    _write_csv(out / "exclusions.csv", ["stage", "subject", "v2", "reason"], exclusion_rows)

    _write_csv(
        out / "clients.csv",
        ["client", "scope", "library", "v1", "v2", "level", "broken", "detections"],
        [[r[k] for k in ("client", "scope", "library", "v1", "v2", "level", "broken", "detections")]
         for r in sorted(client_rows, key=lambda r: (r["library"], r["v1"], r["client"]))],
    )

    _write_csv(
        out / "detections.csv",
        ["library", "v1", "v2", "client", "clientElement", "libraryElement",
         "useKind", "bcKind", "confidence", "stability"],
        [[r[k] for k in ("library", "v1", "v2", "client", "clientElement", "libraryElement",
                         "useKind", "bcKind", "confidence", "stability")]
         for r in sorted(
             detection_rows,
             key=lambda r: (r["library"], r["v1"], r["client"], r["clientElement"], r["libraryElement"], r["bcKind"], r["useKind"]),
         )],
    )


def _summarize(
    derivation: CorpusDerivation,
    client_rows: list[dict],
    detection_rows: list[dict],
    options: PipelineOptions,
) -> dict:
    reasons: dict[str, int] = {}
    for upgrade in derivation.excluded:
        reasons[upgrade.exclusion_reason or "unknown"] = (
            reasons.get(upgrade.exclusion_reason or "unknown", 0) + 1
        )
    skipped: dict[str, int] = {}
    for _, reason in derivation.skipped_versions:
        skipped[reason] = skipped.get(reason, 0) + 1
    by_level: dict[str, int] = {}
    for upgrade in derivation.upgrades:
        assert upgrade.level is not None
        by_level[upgrade.level.value] = by_level.get(upgrade.level.value, 0) + 1
    return {
        "schemaVersion": 1,
        "candidates": derivation.candidate_count,
        "emitted": len(derivation.upgrades),
        "excluded": len(derivation.excluded),
        "exclusionReasons": reasons,
        "skippedVersions": skipped,
        "upgradesByLevel": by_level,
        "clients": len(client_rows),
        "detections": len(detection_rows),
        "scope": options.scope,
    }


def _write_samples(out: Path, client_rows: list[dict], options: PipelineOptions) -> None:
    import random

    size_rows = []
    sample_rows = []
    for level, confidence, margin in options.samples:
        population = [
            r for r in client_rows if level == "all" or r["level"] == level
        ]
        if not population:
            size_rows.append([level, confidence, margin, 0, 0])
            continue
        size = cochran_sample(len(population), confidence, margin, 0.5)
        size_rows.append([level, confidence, margin, len(population), size])
        rng = random.Random(options.seed)
        chosen = rng.sample(range(len(population)), size)
        for index in sorted(chosen):
            row = population[index]
            sample_rows.append([level, row["client"], row["library"], row["v1"], row["v2"]])
    _write_csv(
        out / "sample_sizes.csv",
        ["level", "confidence", "margin", "population", "sample_size"],
        size_rows,
    )
    _write_csv(out / "samples.csv", ["level", "client", "library", "v1", "v2"], sample_rows)
