from dataclasses import asdict, dataclass, field
from typing import List, Optional, Tuple

from ..exceptions import ConfigError

LAMBDA_MODES = ('fixed', 'per_row_adaptive')
W_UPDATE_RULES = ('paper_euclidean', 'is_divergence')
INIT_METHODS = ('nndsvd', 'warm_start', 'truncated_gaussian')
LAMBDA_UPDATES = ('per_row', 'batched')
JACOBIAN_MODES = ('diagonal', 'full')
OUTER_REFERENCES = ('background', 'residual')
STEP_SCALINGS = ('clipped', 'none')


@dataclass(frozen=True)
class ObjectiveValue:
    """Penalized objective split into its IS fit and trace-penalty parts."""
    fit: float
    penalty: float

    @property
    def total(self):
        return self.fit + self.penalty


@dataclass
class SolverConfig:
    """Parameters shared by the fixed-penalty MU baseline and the bi-level solver."""
    rank: int
    max_outer_iters: int = 500
    inner_iters: int = 4
    tol: float = 1e-6
    lambda_mode: str = 'fixed'
    lambda_value: float = 0.0
    step_alpha: float = 0.05
    seed: int = 0
    w_update_rule: str = 'is_divergence'
    floor: float = 1e-12
    init: str = 'warm_start'
    warm_start_iters: int = 10
    lambda_update: str = 'per_row'
    jacobian: str = 'diagonal'
    outer_reference: str = 'background'
    normalize: bool = True
    update_exponent: float = 0.5
    step_scaling: str = 'clipped'
    lambda_max: Optional[float] = 1.0

    def __post_init__(self):
        self.validate()

    def validate(self):
        errors = {}
        if self.rank < 1:
            errors['rank'] = "rank must be a positive integer"
        if self.max_outer_iters < 1:
            errors['max_outer_iters'] = "max_outer_iters must be >= 1"
        if self.inner_iters < 1:
            errors['inner_iters'] = "inner_iters must be >= 1"
        if not self.tol > 0:
            errors['tol'] = "tol must be > 0"
        if not self.step_alpha > 0:
            errors['step_alpha'] = "step_alpha must be > 0"
        if self.lambda_value < 0:
            errors['lambda_value'] = "lambda_value must be >= 0"
        if not self.floor > 0:
            errors['floor'] = "floor must be > 0"
        if self.warm_start_iters < 0:
            errors['warm_start_iters'] = "warm_start_iters must be >= 0"
        if not 0 < self.update_exponent <= 1:
            errors['update_exponent'] = "update_exponent must lie in (0, 1]"
        if self.lambda_max is not None and not self.lambda_max > 0:
            errors['lambda_max'] = "lambda_max must be > 0"
        choices = (
            ('lambda_mode', LAMBDA_MODES),
            ('w_update_rule', W_UPDATE_RULES),
            ('init', INIT_METHODS),
            ('lambda_update', LAMBDA_UPDATES),
            ('jacobian', JACOBIAN_MODES),
            ('outer_reference', OUTER_REFERENCES),
            ('step_scaling', STEP_SCALINGS),
        )
        for name, allowed in choices:
            if getattr(self, name) not in allowed:
                errors[name] = f"{name} must be one of {', '.join(allowed)}"
        if errors:
            raise ConfigError("Invalid solver configuration", errors=errors)
        return self

    def to_dict(self):
        return asdict(self)


@dataclass(frozen=True)
class TraceRecord:
    k: int
    objective: ObjectiveValue
    response: float
    lambdas: Tuple[float, ...]
    seconds: float


@dataclass
class RunTrace:
    """Per-outer-iteration history of a solver run."""
    records: List[TraceRecord] = field(default_factory=list)
    stop_reason: Optional[str] = None

    def append(self, record):
        if self.records and record.seconds < self.records[-1].seconds:
            raise ValueError("trace timestamps must be monotone")
        self.records.append(record)

    def __len__(self):
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    @property
    def responses(self):
        return [record.response for record in self.records]

    @property
    def fits(self):
        return [record.objective.fit for record in self.records]

    def comparable(self):
        """Trace content without wall-clock timings (for determinism checks)."""
        return [
            (r.k, r.objective.fit, r.objective.penalty, r.response, r.lambdas)
            for r in self.records
        ]


@dataclass(frozen=True)
class ResponseReport:
    """Per-row response values r(lambda_l) and their sum R(lambda)."""
    rows: Tuple[float, ...]

    @property
    def total(self):
        return float(sum(self.rows))
