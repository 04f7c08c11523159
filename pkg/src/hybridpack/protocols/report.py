"""Structured results shared by protocol and algorithm runs."""

from __future__ import annotations

import json
import math
from dataclasses import asdict, dataclass, field
from typing import Any

import numpy as np

from ..errors import InvalidArgumentError
from ..hilbert import HybridDims


@dataclass(frozen=True)
class ProtocolConfig:
    dims: HybridDims
    trials: int = 10_000
    seed: int = 0
    eve: bool = False
    p_dec: float = 0.5
    q_test: float = 0.1
    M: int = 2

    def __post_init__(self):
        for name in ("p_dec", "q_test"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise InvalidArgumentError(f"{name} must lie in [0, 1]")
        if self.trials < 1:
            raise InvalidArgumentError("trials must be positive")


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, np.ndarray):
        return _jsonable(x.tolist())
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.floating, float)):
        v = float(x)
        return v if math.isfinite(v) else str(v)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, complex):
        return [x.real, x.imag]
    if isinstance(x, HybridDims):
        return {"d": x.d, "D": x.D}
    return x


@dataclass
class ExperimentReport:
    protocol: str
    params: dict = field(default_factory=dict)
    records: dict = field(default_factory=dict)
    aggregates: dict = field(default_factory=dict)
    reference: dict = field(default_factory=dict)
    deviation_sigma: dict = field(default_factory=dict)
    passed: bool | None = None
    notes: list = field(default_factory=list)

    def to_dict(self, include_records: bool = True) -> dict[str, Any]:
        d = asdict(self)
        if not include_records:
            d.pop("records")
        return _jsonable(d)

    def to_json(self, include_records: bool = False) -> str:
        return json.dumps(self.to_dict(include_records), sort_keys=True)


def binomial_sigma(p: float, n: int) -> float:
    return math.sqrt(max(p * (1 - p), 0.0) / max(n, 1))


def sigma_distance(observed: float, reference: float, n: int) -> float:
    """``|observed - reference|`` in binomial standard deviations at the reference."""
    s = binomial_sigma(reference, n)
    if s == 0:
        return 0.0 if observed == reference else math.inf
    return abs(observed - reference) / s
