"""Search parameters and results."""

from __future__ import annotations

import enum
import hashlib
import json
from dataclasses import dataclass, field
from typing import Iterable

from ..codes import Code
from ..errors import NotFullLength, SpecInfeasible


class Mode(enum.Enum):
    CLASSIFY = "classify"
    EXTEND_DIMENSION = "extend-dimension"
    EXTEND_LENGTH = "extend-length"


@dataclass(frozen=True)
class WeightRule:
    """Admissible nonzero weights: an explicit set, a divisibility window, or both intersected."""

    divisor: int = 1
    d_min: int = 1
    d_max: int | None = None
    explicit: frozenset[int] | None = None

    @classmethod
    def of(cls, weights: Iterable[int]) -> "WeightRule":
        return cls(explicit=frozenset(int(w) for w in weights))

    def allowed(self, n: int) -> frozenset[int]:
        top = n if self.d_max is None else min(n, self.d_max)
        cand = range(max(1, self.d_min), top + 1)
        out = {w for w in cand if w % self.divisor == 0}
        if self.explicit is not None:
            out &= self.explicit
        return frozenset(out)

    def describe(self) -> dict:
        return {
            "divisor": self.divisor,
            "d_min": self.d_min,
            "d_max": self.d_max,
            "explicit": sorted(self.explicit) if self.explicit is not None else None,
        }


@dataclass(frozen=True)
class SearchSpec:
    target_n: int
    target_k: int | None = None
    allowed_weights: WeightRule | frozenset | set | tuple = field(default_factory=WeightRule)
    mode: Mode = Mode.CLASSIFY
    seeds: tuple[Code, ...] = ()
    # most coordinates an extension may append (None: bounded by target_n only);
    # classification ignores it
    new_coords_max: int | None = 1
    exact_length: bool = False
    # weight of the distinguished codeword when lengthening from residuals
    residual_weight: int | None = None
    # largest column multiplicity allowed in results (None: unrestricted)
    max_multiplicity: int | None = None

    def __post_init__(self):
        aw = self.allowed_weights
        if not isinstance(aw, WeightRule):
            object.__setattr__(self, "allowed_weights", WeightRule.of(aw))
        object.__setattr__(self, "seeds", tuple(self.seeds))
        for s in self.seeds:
            if not s.full_length:
                raise NotFullLength("search seeds must be full length")
        if self.target_n < 0:
            raise ValueError("negative length")

    @property
    def rule(self) -> WeightRule:
        return self.allowed_weights  # type: ignore[return-value]

    def allowed(self) -> frozenset[int]:
        # explicit weights outside [1, n] can never occur and are dropped
        a = self.rule.allowed(self.target_n)
        if not a:
            raise SpecInfeasible("no admissible weight in range")
        return a

    def length_ok(self, n: int) -> bool:
        return n == self.target_n if self.exact_length else n <= self.target_n

    def digest(self) -> str:
        """Stable hash identifying the search; stored in checkpoint headers."""
        d = {
            "n": self.target_n,
            "k": self.target_k,
            "weights": self.rule.describe(),
            "mode": self.mode.value,
            "seeds": [s.gen.to_strings() for s in self.seeds],
            "new_coords_max": self.new_coords_max,
            "exact": self.exact_length,
            "w": self.residual_weight,
            "maxmult": self.max_multiplicity,
        }
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:24]


@dataclass
class SearchStats:
    nodes: int = 0
    candidates: int = 0
    isomorph_rejections: int = 0
    wall_time: float = 0.0
    per_level: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "nodes": self.nodes,
            "candidates": self.candidates,
            "isomorph_rejections": self.isomorph_rejections,
            "wall_time": round(self.wall_time, 3),
            "per_level": {str(k): v for k, v in self.per_level.items()},
        }


@dataclass
class SearchResult:
    codes: list[Code]
    stats: SearchStats = field(default_factory=SearchStats)
    labels: list[str] = field(default_factory=list)

    def __len__(self) -> int:
        return len(self.codes)
