"""Resource reports shared by every engine and the CLI."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

ENGINES = ("general", "unambiguous", "linear", "bfvp", "cyk")
# the stable schema written by the command line; other counters stay in the library
REPORT_FIELDS = ("engine", "accepted", "n", "rounds_used", "item_cells", "slashed_cells",
                 "decomposition_pairs", "edge_cells", "pebble_rounds", "wall_time")


@dataclass
class ResourceReport:
    """Outcome of one recognition run plus its round and cell ledger.

    Counters that do not apply to the producing engine are ``None``.
    """

    engine: str
    accepted: bool
    n: int
    rounds_used: int | None = None
    item_cells: int | None = None
    slashed_cells: int | None = None
    decomposition_pairs: int | None = None
    edge_cells: int | None = None
    pebble_rounds: int | None = None
    reach_calls: int | None = None
    graph_nodes: int | None = None
    undetermined_cells: int | None = None
    extra_cells: int | None = None
    wall_time: float = field(default=0.0, compare=False)

    def __post_init__(self):
        if self.engine not in ENGINES:
            raise ValueError(f"unknown engine {self.engine!r}")

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    def schema_dict(self) -> dict:
        """Documented fields only; counters the engine does not produce are dropped."""
        d = self.to_dict()
        return {k: d[k] for k in REPORT_FIELDS if d[k] is not None}

    @classmethod
    def from_dict(cls, d: dict) -> "ResourceReport":
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ValueError(f"unknown report fields: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> "ResourceReport":
        return cls.from_dict(json.loads(text))

    def summary(self) -> str:
        parts = [f"engine={self.engine}", f"accepted={str(self.accepted).lower()}", f"n={self.n}"]
        for f in fields(self):
            if f.name in ("engine", "accepted", "n", "wall_time"):
                continue
            v = getattr(self, f.name)
            if v is not None:
                parts.append(f"{f.name}={v}")
        parts.append(f"wall_time={self.wall_time:.4f}s")
        return " ".join(parts)
