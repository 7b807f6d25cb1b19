"""Run manifests: what was run, on which inputs, and what it wrote."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import __version__

MANIFEST = "manifest.json"


def sha256_file(path) -> str:
    return hashlib.sha256(Path(path).read_bytes()).hexdigest()


@dataclass
class RunManifest:
    command: str
    config: str
    overrides: dict
    out: str
    version: str = __version__
    input_hash: str = ""
    outputs: dict = field(default_factory=dict)

    def compute_input_hash(self) -> str:
        h = hashlib.sha256()
        h.update(self.command.encode())
        h.update(Path(self.config).read_bytes())
        h.update(json.dumps(self.overrides, sort_keys=True).encode())
        h.update(self.version.encode())
        return h.hexdigest()

    def record_outputs(self, paths) -> None:
        out = Path(self.out)
        self.outputs = {str(Path(p).resolve().relative_to(out)): sha256_file(p) for p in sorted(paths)}

    def write(self) -> Path:
        self.input_hash = self.compute_input_hash()
        path = Path(self.out) / MANIFEST
        path.write_text(json.dumps(asdict(self), indent=2, sort_keys=True) + "\n")
        return path

    @classmethod
    def read(cls, path) -> "RunManifest":
        return cls(**json.loads(Path(path).read_text()))
