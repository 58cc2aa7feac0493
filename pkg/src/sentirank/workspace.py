"""A workspace is a plain directory of TSV stage outputs plus ``manifest.json``.

The manifest records, per stage, the digests of the files it read and
wrote. A stage is stale when any recorded output no longer matches its
file, or when an upstream workspace file it read has changed since.
"""

from __future__ import annotations

import contextlib
import fcntl
import hashlib
import json
from pathlib import Path
from typing import Iterable, Iterator, Mapping

from sentirank.errors import AnalysisError, InputError

MANIFEST = "manifest.json"
LOCK = ".lock"

DEFAULTS = {
    "damping": 0.55,
    "tolerance": 1e-10,
    "max_iterations": 200,
    "curate_df": None,
    "tie_policy": "competition_min",
    "rbd_p": 0.9,
    "depth": None,
    "top": 20,
}


def file_digest(path: str | Path) -> str:
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for block in iter(lambda: fh.read(1 << 16), b""):
            h.update(block)
    return "sha256:" + h.hexdigest()


def _coerce(key: str, raw: str):
    raw = raw.strip().strip('"').strip("'")
    if raw.lower() in ("", "none", "null"):
        return None
    if key in ("max_iterations", "depth", "top"):
        return int(raw)
    if key in ("damping", "tolerance", "curate_df", "rbd_p"):
        return float(raw)
    return raw


def load_config(path: str | Path) -> dict:
    """Read ``key = value`` lines (``#`` comments allowed, ``[sections]`` ignored)."""
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except FileNotFoundError:
        raise InputError(f"file not found: {path}")
    config = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line or line.startswith("["):
            continue
        key, sep, value = line.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in DEFAULTS:
            raise InputError(f"{path}:{lineno}: unknown or malformed setting {line!r}")
        try:
            config[key] = _coerce(key, value)
        except ValueError:
            raise InputError(f"{path}:{lineno}: bad value for {key}: {value.strip()!r}")
    return config


def resolve_config(cli: Mapping, file_config: Mapping | None = None) -> dict:
    """CLI flags beat the config file, which beats built-in defaults."""
    resolved = dict(DEFAULTS)
    resolved.update({k: v for k, v in (file_config or {}).items() if k in DEFAULTS})
    resolved.update({k: v for k, v in cli.items() if k in DEFAULTS and v is not None})
    return resolved


class Workspace:
    def __init__(self, root: str | Path):
        self.root = Path(root)
        self.manifest = self._read_manifest()

    def _read_manifest(self) -> dict:
        path = self.root / MANIFEST
        if path.exists():
            try:
                return json.loads(path.read_text(encoding="utf-8"))
            except json.JSONDecodeError as exc:
                raise InputError(f"{path}: corrupt manifest ({exc.msg})")
        return {"version": 1, "config": {}, "stages": {}}

    def path(self, name: str) -> Path:
        return self.root / name

    def exists(self) -> bool:
        return (self.root / MANIFEST).exists()

    def save(self) -> None:
        self.root.mkdir(parents=True, exist_ok=True)
        text = json.dumps(self.manifest, indent=2, sort_keys=True) + "\n"
        (self.root / MANIFEST).write_text(text, encoding="utf-8")

    @contextlib.contextmanager
    def lock(self) -> Iterator[None]:
        """Advisory single-writer lock for the duration of a command."""
        self.root.mkdir(parents=True, exist_ok=True)
        with open(self.root / LOCK, "w") as fh:
            try:
                fcntl.flock(fh, fcntl.LOCK_EX | fcntl.LOCK_NB)
            except BlockingIOError:
                raise AnalysisError(f"workspace {self.root} is locked by another process")
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    @property
    def stages(self) -> dict:
        return self.manifest.setdefault("stages", {})

    def has_stage(self, name: str) -> bool:
        return name in self.stages

    def record_stage(
        self,
        name: str,
        inputs: Iterable[str],
        outputs: Iterable[str],
        params: Mapping | None = None,
        external: Mapping[str, str | Path] | None = None,
    ) -> None:
        """Record digests: ``inputs``/``outputs`` are workspace-relative names."""
        entry = {
            "inputs": {n: file_digest(self.path(n)) for n in sorted(set(inputs))},
            "outputs": {n: file_digest(self.path(n)) for n in sorted(set(outputs))},
            "external": {k: file_digest(p) for k, p in sorted((external or {}).items())},
            "params": dict(params or {}),
        }
        self.stages[name] = entry
        self.manifest.setdefault("config", {}).update(params or {})

    def problems(self, name: str) -> list[str]:
        if name not in self.stages:
            return [f"stage {name} has not been run"]
        entry = self.stages[name]
        found = []
        for rel, digest in entry.get("outputs", {}).items():
            p = self.path(rel)
            if not p.exists():
                found.append(f"{rel} is missing")
            elif file_digest(p) != digest:
                found.append(f"{rel} was modified after stage {name} wrote it")
        for rel, digest in entry.get("inputs", {}).items():
            p = self.path(rel)
            if not p.exists() or file_digest(p) != digest:
                found.append(f"upstream {rel} changed since stage {name} ran")
        return found

    def require(self, name: str) -> None:
        """Raise unless ``name`` ran and is fresh."""
        if name not in self.stages:
            raise InputError(f"stage {name} has not been run in {self.root}")
        found = self.problems(name)
        if found:
            raise AnalysisError(f"stale stage {name}: " + "; ".join(found))

    def stale_stages(self) -> dict[str, list[str]]:
        return {n: p for n in sorted(self.stages) if (p := self.problems(n))}
