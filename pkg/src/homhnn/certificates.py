"""Exact embedding certificates shared by the enveloping and HNN code."""
from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class EmbeddingCertificate:
    """Witness that a structure map is injective at a fixed truncation.

    ``relations`` holds (label, residual-is-zero) pairs. There is no tolerance:
    every residual is computed in exact arithmetic.
    """

    kind: str
    truncation: tuple
    relations: tuple
    kernel_dim: int
    info: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return self.kernel_dim == 0 and all(ok for _, ok in self.relations)

    def __bool__(self):
        return self.passed

    @property
    def failing_relations(self):
        return [label for label, ok in self.relations if not ok]

    def to_dict(self):
        return {
            "kind": self.kind,
            "truncation": dict(self.truncation),
            "relations": [{"relation": label, "zero": ok} for label, ok in self.relations],
            "kernel_dim": self.kernel_dim,
            "info": {k: v for k, v in self.info},
            "pass": self.passed,
        }
