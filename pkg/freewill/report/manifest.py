"""Run manifests: config echo plus SHA-256 of every output file.

The manifest sits at ``<out>/manifest.json`` and lists files by their
POSIX path relative to ``<out>``. It never lists itself.
"""
from __future__ import annotations

import hashlib
import json
import logging
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Iterable

from pydantic import BaseModel, ConfigDict, ValidationError

from freewill import __version__
from freewill.config import ExperimentConfig
from freewill.errors import ManifestInconsistent, ReportIOError

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
_CHUNK = 1 << 16


class RunManifest(BaseModel):
    """Reproducibility envelope of one output directory.

    Attributes:
        config: Full configuration echo; feeding it back reproduces the run.
        version: Package version that wrote the outputs.
        timestamp: UTC time of writing, ISO-8601.
        seeds: Effective seeds (seed base already added).
        seed_base: Value of the seed offset in effect.
        files: Relative path -> SHA-256 hex digest.
        extra: Free-form context (subcommand, figure, sweep value).
    """

    model_config = ConfigDict(extra="forbid")

    config: dict[str, Any]
    version: str
    timestamp: str
    seeds: list[int]
    seed_base: int = 0
    files: dict[str, str]
    extra: dict[str, Any] = {}


def file_sha256(path: str | Path) -> str:
    h = hashlib.sha256()
    p = Path(path)
    try:
        with open(p, "rb") as fh:
            for chunk in iter(lambda: fh.read(_CHUNK), b""):
                h.update(chunk)
    except OSError as exc:
        raise ReportIOError(p, exc.strerror or str(exc)) from None
    return h.hexdigest()


def _utc_now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds").replace("+00:00", "Z")


def build_manifest(config: ExperimentConfig, output_dir: str | Path, files: Iterable[str | Path],
                   seed_base: int = 0, extra: dict[str, Any] | None = None) -> RunManifest:
    """Hash ``files`` (absolute or relative to ``output_dir``) into a manifest."""
    root = Path(output_dir)
    hashes = {}
    for f in files:
        p = Path(f)
        rel = p.relative_to(root) if p.is_absolute() else p
        hashes[rel.as_posix()] = file_sha256(root / rel)
    return RunManifest(
        config=config.to_json_dict(),
        version=__version__,
        timestamp=_utc_now(),
        seeds=config.seeds,
        seed_base=seed_base,
        files=hashes,
        extra=dict(extra or {}),
    )


def check_files(manifest: RunManifest, root: str | Path) -> list[str]:
    """Relative paths that are missing or whose hash differs."""
    root = Path(root)
    problems = []
    for rel, digest in sorted(manifest.files.items()):
        p = root / rel
        if not p.is_file():
            problems.append(f"{rel}: missing")
        elif file_sha256(p) != digest:
            problems.append(f"{rel}: hash mismatch")
    return problems


def write_manifest(manifest: RunManifest, path: str | Path) -> Path:
    """Write ``manifest`` as sorted-key JSON after checking every listed file."""
    p = Path(path)
    problems = check_files(manifest, p.parent)
    if problems:
        raise ManifestInconsistent(problems)
    text = json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
    try:
        p.parent.mkdir(parents=True, exist_ok=True)
        with open(p, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise ReportIOError(p, exc.strerror or str(exc)) from None
    logger.info("wrote %s (%d files)", p, len(manifest.files))
    return p


def read_manifest(output_dir: str | Path) -> RunManifest:
    p = Path(output_dir) / MANIFEST_NAME
    try:
        data = json.loads(p.read_text(encoding="utf-8"))
        return RunManifest.model_validate(data)
    except OSError as exc:
        raise ReportIOError(p, exc.strerror or str(exc)) from None
    except (json.JSONDecodeError, ValidationError) as exc:
        raise ManifestInconsistent([f"{MANIFEST_NAME}: unreadable ({exc.__class__.__name__})"]) from None


def verify_manifest(output_dir: str | Path) -> list[str]:
    """Re-hash every listed file; an empty list means the directory is intact."""
    manifest = read_manifest(output_dir)
    problems = check_files(manifest, output_dir)
    for line in problems:
        logger.warning("verify: %s", line)
    return problems
