"""Serializable verdict records shared by every certifying operation."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Union

SCHEMA_VERSION = "1"


@dataclass
class Certificate:
    """One theorem instance checked exactly at finite depth.

    ``inputs`` carries everything needed to regenerate the record, so a
    stored certificate can be re-verified by recomputation.
    """

    kind: str
    claim: str
    hypotheses: list
    witness: dict
    verified: bool
    numeric_values: dict = field(default_factory=dict)
    exact_values: dict = field(default_factory=dict)
    inputs: dict = field(default_factory=dict)

    @property
    def hypotheses_met(self) -> bool:
        return all(h.get("holds", True) for h in self.hypotheses)

    def to_json(self) -> dict:
        out = {"schema_version": SCHEMA_VERSION}
        out.update(asdict(self))
        return out

    def dumps(self) -> str:
        return dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "Certificate":
        if data.get("schema_version") != SCHEMA_VERSION:
            raise ValueError(f"unsupported certificate schema {data.get('schema_version')!r}")
        fields = {k: data[k] for k in ("kind", "claim", "hypotheses", "witness", "verified")}
        return cls(numeric_values=data.get("numeric_values", {}), exact_values=data.get("exact_values", {}),
                   inputs=data.get("inputs", {}), **fields)


def dumps(obj: Any) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def load_certificates(path: Union[str, Path]) -> list[Certificate]:
    data = json.loads(Path(path).read_text())
    if isinstance(data, dict) and "certificates" in data:
        data = data["certificates"]
    if isinstance(data, dict):
        data = [data]
    return [Certificate.from_json(d) for d in data]
