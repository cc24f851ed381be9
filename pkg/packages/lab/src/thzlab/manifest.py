from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from datetime import UTC, datetime
from pathlib import Path
from typing import TypedDict

from thzsounder.constants import SCHEMA_VERSION
from thzsounder.serializer import Model, Serializer

from thzlab.helper import relative_posix, sha256_file


class ArtifactJson(TypedDict):
    path: str
    sha256: str
    size: int


@dataclass(frozen=True, slots=True)
class Artifact(Model[ArtifactJson]):
    path: str
    sha256: str
    size: int

    @classmethod
    def of(cls, root: Path, path: Path) -> Artifact:
        return cls(
            path=relative_posix(root, path),
            sha256=sha256_file(path),
            size=path.stat().st_size,
        )

    def to_json(self) -> ArtifactJson:
        return {"path": self.path, "sha256": self.sha256, "size": self.size}

    @classmethod
    def from_json(cls, json: ArtifactJson) -> Artifact:
        return cls(path=json["path"], sha256=json["sha256"], size=int(json["size"]))


class ManifestJson(TypedDict):
    schema_version: int
    created_at: str
    scenario: str
    seed: int
    bands: list[str]
    stages: list[str]
    artifacts: list[ArtifactJson]


@dataclass(frozen=True, slots=True)
class Manifest(Model[ManifestJson]):
    created_at: str
    scenario: str
    seed: int
    bands: tuple[str, ...]
    stages: tuple[str, ...]
    artifacts: tuple[Artifact, ...]

    def digest(self, path: str) -> str | None:
        for artifact in self.artifacts:
            if artifact.path == path:
                return artifact.sha256
        return None

    def paths(self) -> list[str]:
        return [artifact.path for artifact in self.artifacts]

    def to_json(self) -> ManifestJson:
        return {
            "schema_version": SCHEMA_VERSION,
            "created_at": self.created_at,
            "scenario": self.scenario,
            "seed": self.seed,
            "bands": list(self.bands),
            "stages": list(self.stages),
            "artifacts": [artifact.to_json() for artifact in self.artifacts],
        }

    @classmethod
    def from_json(cls, json: ManifestJson) -> Manifest:
        return cls(
            created_at=json["created_at"],
            scenario=json["scenario"],
            seed=int(json["seed"]),
            bands=tuple(json["bands"]),
            stages=tuple(json["stages"]),
            artifacts=tuple(Artifact.from_json(item) for item in json["artifacts"]),
        )


MANIFEST_SERIALIZER = Serializer.model(Manifest).to_json()


def collect_artifacts(root: Path, *, exclude: Sequence[Path] = ()) -> list[Artifact]:
    excluded = {path.resolve() for path in exclude}
    artifacts = []
    for path in root.rglob("*"):
        if not path.is_file():
            continue
        resolved = path.resolve()
        if resolved in excluded or any(parent in excluded for parent in resolved.parents):
            continue
        artifacts.append(Artifact.of(root, path))
    return sorted(artifacts, key=lambda artifact: artifact.path)


def build_manifest(
    root: Path,
    *,
    scenario: str,
    seed: int,
    bands: Sequence[str],
    stages: Sequence[str],
    exclude: Sequence[Path] = (),
    created_at: str | None = None,
) -> Manifest:
    return Manifest(
        created_at=created_at or datetime.now(UTC).isoformat(timespec="seconds"),
        scenario=scenario,
        seed=seed,
        bands=tuple(bands),
        stages=tuple(stages),
        artifacts=tuple(collect_artifacts(root, exclude=exclude)),
    )


def write_manifest(path: Path, manifest: Manifest) -> Path:
    return MANIFEST_SERIALIZER.write(path, manifest)


def read_manifest(path: Path) -> Manifest:
    return MANIFEST_SERIALIZER.read(path)
