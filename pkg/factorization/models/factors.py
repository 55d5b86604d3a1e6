from dataclasses import dataclass

import numpy as np

from ..exceptions import DimensionError, DomainError


@dataclass
class FactorPair:
    """Nonnegative factors W (m x r) and H (r x n) with X ~ WH."""
    W: np.ndarray
    H: np.ndarray

    def __post_init__(self):
        self.W = np.asarray(self.W, dtype=float)
        self.H = np.asarray(self.H, dtype=float)
        if self.W.ndim != 2 or self.H.ndim != 2 or self.W.shape[1] != self.H.shape[0]:
            raise DimensionError(
                f"W {self.W.shape} and H {self.H.shape} are not conformal"
            )

    @property
    def rank(self):
        return self.W.shape[1]

    @property
    def shape(self):
        return self.W.shape[0], self.H.shape[1]

    def product(self):
        return self.W @ self.H

    def copy(self):
        return FactorPair(self.W.copy(), self.H.copy())

    def validate(self):
        """Check the nonnegativity/finiteness invariants; raise on violation."""
        for name, matrix in (('W', self.W), ('H', self.H)):
            if not np.all(np.isfinite(matrix)):
                raise DomainError(f"{name} contains NaN or Inf", index=np.argwhere(~np.isfinite(matrix))[0])
            if np.any(matrix < 0):
                raise DomainError(f"{name} has a negative entry", index=np.argwhere(matrix < 0)[0])
        m, n = self.shape
        if self.rank > min(m, n):
            raise DimensionError(f"rank {self.rank} exceeds min(m, n) = {min(m, n)}")
        return self


@dataclass
class PenaltyVector:
    """One nonnegative penalty hyperparameter per row of H."""
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=float).reshape(-1)
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise DomainError("penalty hyperparameters must be finite and nonnegative")

    @classmethod
    def constant(cls, value, r):
        return cls(np.full(r, float(value)))

    @classmethod
    def uniform(cls, r, rng):
        """lambda^0 ~ U[0, 1] per entry, drawn from the given generator."""
        return cls(rng.uniform(0.0, 1.0, size=r))

    def __len__(self):
        return self.values.size

    def __getitem__(self, index):
        return self.values[index]

    def copy(self):
        return PenaltyVector(self.values.copy())

    def tolist(self):
        return [float(v) for v in self.values]


@dataclass
class FmdState:
    """Forward-mode sensitivity s^t = d h_l^t / d lambda_l with the terms that produced it."""
    s: np.ndarray
    A_diag: np.ndarray
    b: np.ndarray

    @classmethod
    def initial(cls, b0):
        b0 = np.asarray(b0, dtype=float)
        return cls(s=b0.copy(), A_diag=np.zeros_like(b0), b=b0.copy())
