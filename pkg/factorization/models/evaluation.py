from dataclasses import dataclass, field
from typing import Dict, List, Tuple

from ..exceptions import ConfigError, DomainError


@dataclass(frozen=True)
class SynthSpec:
    """Dimensions, factor densities and seed of a synthetic dataset."""
    m: int = 100
    n: int = 70
    r: int = 3
    density_W: float = 0.10
    density_H: float = 0.70
    seed: int = 0

    def __post_init__(self):
        errors = {}
        for name in ('m', 'n', 'r'):
            if getattr(self, name) < 1:
                errors[name] = f"{name} must be positive"
        for name in ('density_W', 'density_H'):
            if not 0 < getattr(self, name) <= 1:
                errors[name] = f"{name} must lie in (0, 1]"
        if not errors and self.r > min(self.m, self.n):
            errors['r'] = "r must not exceed min(m, n)"
        if errors:
            raise ConfigError("Invalid synthetic dataset specification", errors=errors)


@dataclass(frozen=True)
class SirReport:
    """SIR in dB per matched component; permutation[i] is the estimate matched to truth i."""
    per_component: Tuple[float, ...]
    permutation: Tuple[int, ...]

    def __post_init__(self):
        if sorted(self.permutation) != list(range(len(self.permutation))):
            raise ValueError(f"permutation {self.permutation} is not a bijection")

    @property
    def mean(self):
        return float(sum(self.per_component) / len(self.per_component))


@dataclass(frozen=True)
class TestResult:
    statistic: float
    p_value: float

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise DomainError(f"p-value {self.p_value} outside [0, 1]")


@dataclass
class ReportBundle:
    """Per-run table plus everything derived from it, and the resolved config."""
    config: Dict
    runs: List[Dict] = field(default_factory=list)
    aggregates: List[Dict] = field(default_factory=list)
    kruskal: List[Dict] = field(default_factory=list)
    pairwise: List[Dict] = field(default_factory=list)
    traces: List[Dict] = field(default_factory=list)
    failures: List[Dict] = field(default_factory=list)

    @property
    def partial(self):
        return bool(self.failures)
