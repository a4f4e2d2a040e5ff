"""Shared numeric plumbing for both kernel backends.

Domain adjustment happens once per vector (or once per matrix, for the row
engines). Guards fire at evaluation time: in lenient mode a denominator with
magnitude below EPSILON and a log argument below EPSILON are replaced by
EPSILON; in strict mode either condition raises DomainError. Square-root
arguments in the catalog are sums of squares and therefore exactly
non-negative in IEEE arithmetic; they are clamped at zero, never
epsilon-substituted, so identity distances stay exactly zero.
"""

from __future__ import annotations

import numpy as np

from ..errors import DomainError, ShapeError
from .registry import Domain

EPSILON = 1e-10


def as_vector(x, name: str = "x") -> np.ndarray:
    v = np.asarray(x, dtype=np.float64)
    if v.ndim != 1:
        raise ShapeError(f"{name} must be 1-D, got shape {v.shape}")
    if v.size == 0:
        raise ShapeError(f"{name} must have at least one component")
    return v


def as_matrix(X, name: str = "X") -> np.ndarray:
    m = np.asarray(X, dtype=np.float64)
    if m.ndim != 2:
        raise ShapeError(f"{name} must be 2-D, got shape {m.shape}")
    if m.shape[0] == 0 or m.shape[1] == 0:
        raise ShapeError(f"{name} must be non-empty in both dimensions")
    return np.ascontiguousarray(m)


def adjust(v: np.ndarray, domain: Domain, strict: bool, ctx: str) -> np.ndarray:
    """Clamp (lenient) or validate (strict) components into the domain.

    Non-finite components are rejected in both modes. Returns a float64
    array safe for the kernels to read; never mutates the input.
    """
    if not np.isfinite(v).all():
        raise DomainError(f"{ctx}: non-finite component in input")
    if domain is Domain.REAL:
        return v
    if domain is Domain.NON_NEGATIVE:
        if strict:
            if (v < 0.0).any():
                raise DomainError(f"{ctx}: negative component outside non-negative domain")
            return v
        return np.maximum(v, 0.0)
    if strict:
        if (v <= 0.0).any():
            raise DomainError(f"{ctx}: non-positive component outside positive domain")
        return v
    return np.maximum(v, EPSILON)


class Guard:
    """Denominator and log-argument policy, scalar and array flavors."""

    __slots__ = ("strict", "ctx")

    def __init__(self, strict: bool, ctx: str) -> None:
        self.strict = strict
        self.ctx = ctx

    def den(self, s: float) -> float:
        if abs(s) < EPSILON:
            if self.strict:
                raise DomainError(f"{self.ctx}: denominator magnitude below epsilon")
            return EPSILON
        return s

    def log(self, s: float) -> float:
        if s < EPSILON:
            if self.strict:
                raise DomainError(f"{self.ctx}: log argument below epsilon")
            return EPSILON
        return s

    def den_arr(self, a: np.ndarray) -> np.ndarray:
        bad = np.abs(a) < EPSILON
        if bad.any():
            if self.strict:
                raise DomainError(f"{self.ctx}: denominator magnitude below epsilon")
            return np.where(bad, EPSILON, a)
        return a

    def log_arr(self, a: np.ndarray) -> np.ndarray:
        bad = a < EPSILON
        if bad.any():
            if self.strict:
                raise DomainError(f"{self.ctx}: log argument below epsilon")
            return np.where(bad, EPSILON, a)
        return a
