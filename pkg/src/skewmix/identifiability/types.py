"""Result containers for the identifiability checks and ratio-limit traces."""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ..errors import PreconditionError
from ..numerics import PsdClass


class Verdict(str, enum.Enum):
    IDENTIFIABLE = "Identifiable"
    CONDITION_VIOLATED = "ConditionViolated"
    DEGENERATE = "Degenerate"


class Theorem(str, enum.Enum):
    SN = "SN"
    MSN = "MSN"
    CFUSN = "CFUSN"

    @classmethod
    def for_family(cls, family: str) -> "Theorem":
        return cls(family.upper())


class Transform(str, enum.Enum):
    CF = "CF"
    MGF = "MGF"


class LimitVerdict(str, enum.Enum):
    TO_ZERO = "->0"
    TO_INF = "->inf"
    BOUNDED_AWAY = "bounded-away"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class LogComplex:
    """``exp(log_abs) * exp(i * phase)`` with the phase kept unreduced."""

    log_abs: float
    phase: float

    def __mul__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_abs + other.log_abs, self.phase + other.phase)

    def __truediv__(self, other: "LogComplex") -> "LogComplex":
        return LogComplex(self.log_abs - other.log_abs, self.phase - other.phase)

    def to_complex(self) -> complex:
        return cmath.rect(math.exp(self.log_abs), self.phase) if self.log_abs > -math.inf else 0j

    @classmethod
    def from_complex(cls, z: complex) -> "LogComplex":
        return cls(math.log(abs(z)) if z != 0 else -math.inf, cmath.phase(z))

    @classmethod
    def from_log(cls, z: complex) -> "LogComplex":
        return cls(float(np.real(z)), float(np.imag(z)))


@dataclass(frozen=True)
class IdentifiabilityReport:
    verdict: Verdict
    theorem: Theorem
    gamma_diff_class: PsdClass
    tolerance_used: float
    violated_clause: Optional[str] = None
    witness: Optional[np.ndarray] = None
    transform: Optional[Transform] = None

    def __post_init__(self):
        if self.verdict is Verdict.CONDITION_VIOLATED and not self.violated_clause:
            raise PreconditionError("ConditionViolated report needs a violated_clause")
        if self.witness is not None:
            w = np.atleast_1d(np.asarray(self.witness, dtype=float))
            w.setflags(write=False)
            object.__setattr__(self, "witness", w)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "theorem": self.theorem.value,
            "violated_clause": self.violated_clause,
            "witness": None if self.witness is None else self.witness.tolist(),
            "transform": None if self.transform is None else self.transform.value,
            "gamma_diff_class": self.gamma_diff_class.to_dict(),
            "tolerance_used": self.tolerance_used,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IdentifiabilityReport":
        return cls(
            verdict=Verdict(d["verdict"]),
            theorem=Theorem(d["theorem"]),
            gamma_diff_class=PsdClass.from_dict(d["gamma_diff_class"]),
            tolerance_used=float(d["tolerance_used"]),
            violated_clause=d.get("violated_clause"),
            witness=None if d.get("witness") is None else np.asarray(d["witness"], dtype=float),
            transform=None if d.get("transform") is None else Transform(d["transform"]),
        )


@dataclass(frozen=True)
class DirectionCell:
    """Columns (by index) that are nonzero multiples of ``direction``.

    The zero cell has ``direction`` equal to the zero vector.
    """

    direction: np.ndarray
    members: tuple[int, ...]

    @property
    def is_zero(self) -> bool:
        return not np.any(self.direction)


@dataclass(frozen=True)
class DirectionPartition:
    cells: tuple[DirectionCell, ...]
    vectors: np.ndarray = field(repr=False)

    def cell_of(self, index: int) -> DirectionCell:
        for cell in self.cells:
            if index in cell.members:
                return cell
        raise KeyError(index)


@dataclass(frozen=True)
class RatioTrace:
    c_grid: np.ndarray
    log_abs_ratio: np.ndarray
    phase: np.ndarray
    transform: Transform
    direction: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.c_grid, dtype=float)
        if c.ndim != 1 or not (len(c) == len(self.log_abs_ratio) == len(self.phase)):
            raise PreconditionError("trace arrays must be 1-d with equal lengths")
        if len(c) > 1 and np.any(np.diff(c) <= 0):
            raise PreconditionError("c_grid must be strictly increasing")


@dataclass(frozen=True)
class RatioLimitResult:
    """A trace with its observed verdict and the one predicted from the parameters.

    For CFUSN under the CF transform ``normalized`` holds ``ratio / V`` along
    the grid and ``xi`` its predicted limit.
    """

    trace: RatioTrace
    verdict: LimitVerdict
    predicted: LimitVerdict
    log_log_slope: float
    normalized: Optional[np.ndarray] = None
    xi: Optional[complex] = None

    @property
    def agrees(self) -> bool:
        return self.verdict is self.predicted
