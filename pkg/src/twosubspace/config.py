"""JSON configuration: system definitions plus search budgets.

Layout::

    {"systems": [{"id": ..., "kind": ..., "payload": {...}}, ...],
     "budgets": {"n_terms": ..., "head": ..., "k_cap_exp": ..., ...}}

Kinds and payloads:

* ``finite-matrix``: ``{"ambient_dim": n, "e1": [v, ...], "e2": [v, ...]}``
  with spanning vectors listed one per row.
* ``graph-finite``: ``{"matrix": [[...], ...]}``, the operator ``T`` whose
  graph system is meant.
* ``graph-diagonal``: diagonal model fields (``branches`` as
  ``{c, a, p, b, q}``, ``overrides``, ``shift_offset``, ``kernel_dim``,
  ``interval_parts``).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields
from importlib import resources
from pathlib import Path

import numpy as np

from . import finsys
from .seqclassify import Budgets
from .seqmodel import DiagonalSpec

KINDS = ("finite-matrix", "graph-finite", "graph-diagonal")


class ConfigError(ValueError):
    pass


def _matrix(rows, what: str) -> list[list[float]]:
    try:
        a = np.array(rows, dtype=float)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{what}: not a numeric matrix") from exc
    if a.size == 0:
        return []
    if a.ndim != 2 or not np.all(np.isfinite(a)):
        raise ConfigError(f"{what}: expected a rectangular finite matrix")
    return a.tolist()


@dataclass(frozen=True)
class SystemConfig:
    id: str
    kind: str
    payload: dict

    @classmethod
    def from_dict(cls, d: dict) -> SystemConfig:
        extra = set(d) - {"id", "kind", "payload"}
        if extra:
            raise ConfigError(f"unknown system keys {sorted(extra)}")
        try:
            sid, kind, payload = str(d["id"]), d["kind"], d["payload"]
        except KeyError as exc:
            raise ConfigError(f"system entry missing {exc}") from None
        if kind not in KINDS:
            raise ConfigError(f"{sid}: unknown kind {kind!r}")
        if not isinstance(payload, dict):
            raise ConfigError(f"{sid}: payload must be an object")
        return cls(sid, kind, _canonical(sid, kind, payload))

    def to_dict(self) -> dict:
        return {"id": self.id, "kind": self.kind, "payload": self.payload}

    @property
    def is_diagonal(self) -> bool:
        return self.kind == "graph-diagonal"

    def spec(self) -> DiagonalSpec:
        return DiagonalSpec.from_dict(self.payload)

    def matrix(self) -> np.ndarray:
        return np.array(self.payload["matrix"], dtype=float).reshape(self._shape())

    def _shape(self):
        m = self.payload["matrix"]
        return (len(m), len(m[0]) if m else 0)

    def system(self) -> finsys.FiniteSystem:
        if self.kind == "graph-finite":
            return finsys.graph_system(self.matrix())
        if self.kind == "finite-matrix":
            n = self.payload["ambient_dim"]
            cols = [np.array(self.payload[k], dtype=float).reshape(-1, n).T for k in ("e1", "e2")]
            return finsys.FiniteSystem.from_bases(n, *cols)
        raise ConfigError(f"{self.id}: diagonal models have no finite system")


def _canonical(sid: str, kind: str, payload: dict) -> dict:
    try:
        if kind == "graph-diagonal":
            return DiagonalSpec.from_dict(payload).as_dict()
        if kind == "graph-finite":
            if set(payload) != {"matrix"}:
                raise ConfigError("graph-finite payload takes exactly 'matrix'")
            m = _matrix(payload["matrix"], "matrix")
            if not m:
                raise ConfigError("matrix must be non-empty")
            return {"matrix": m}
        if set(payload) != {"ambient_dim", "e1", "e2"}:
            raise ConfigError("finite-matrix payload takes 'ambient_dim', 'e1', 'e2'")
        n = int(payload["ambient_dim"])
        out = {"ambient_dim": n}
        for k in ("e1", "e2"):
            vecs = _matrix(payload[k], k)
            if any(len(v) != n for v in vecs):
                raise ConfigError(f"{k}: vectors must have length {n}")
            out[k] = vecs
        return out
    except ConfigError as exc:
        raise ConfigError(f"{sid}: {exc}") from None
    except (TypeError, ValueError, KeyError) as exc:
        raise ConfigError(f"{sid}: {exc}") from None


def budgets_from_dict(d: dict) -> Budgets:
    known = {f.name for f in fields(Budgets)}
    extra = set(d) - known
    if extra:
        raise ConfigError(f"unknown budget keys {sorted(extra)}")
    try:
        return Budgets(**{k: int(v) for k, v in d.items()})
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"budgets: {exc}") from None


@dataclass(frozen=True)
class Config:
    systems: tuple[SystemConfig, ...]
    budgets: Budgets = field(default_factory=Budgets)

    @classmethod
    def from_dict(cls, d: dict) -> Config:
        if not isinstance(d, dict) or "systems" not in d:
            raise ConfigError("config must be an object with a 'systems' list")
        extra = set(d) - {"systems", "budgets"}
        if extra:
            raise ConfigError(f"unknown top-level keys {sorted(extra)}")
        systems = tuple(SystemConfig.from_dict(s) for s in d["systems"])
        ids = [s.id for s in systems]
        dup = sorted({i for i in ids if ids.count(i) > 1})
        if dup:
            raise ConfigError(f"duplicate system ids {dup}")
        return cls(systems, budgets_from_dict(d.get("budgets", {})))

    def to_dict(self) -> dict:
        return {"systems": [s.to_dict() for s in self.systems],
                "budgets": self.budgets.to_dict()}

    def get(self, sid: str) -> SystemConfig:
        for s in self.systems:
            if s.id == sid:
                return s
        raise ConfigError(f"unknown system id {sid!r}")


def loads(text: str) -> Config:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON: {exc}") from None
    return Config.from_dict(data)


def load(path) -> Config:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read {path}: {exc.strerror}") from None
    return loads(text)


def dumps(cfg: Config) -> str:
    return json.dumps(cfg.to_dict(), indent=2, sort_keys=True)


def bundled() -> Config:
    """The example catalogue shipped with the package."""
    return loads(resources.files("twosubspace").joinpath("data/examples.json").read_text())
