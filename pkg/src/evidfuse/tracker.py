"""Sequential target-type estimation from unreliable classifier declarations.

The estimator maintains a running assignment over the type frame. Each scan
converts the classifier's declared type into an observation assignment using
the classifier's own confusion matrix, fuses it with the running prior under
a configured combination rule, and extracts a decision. The prior for the
first scan is always the vacuous assignment (full ignorance).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import fsum, isfinite
from typing import Sequence

from .core import (
    DecisionCriterion,
    Frame,
    MassFunction,
    SUM_TOLERANCE,
    decide,
    vacuous_bba,
)
from .errors import EvidenceError, FrameError
from .rules import RuleConfig, combine


@dataclass(frozen=True)
class ConfusionMatrix:
    """Row-stochastic classifier model.

    ``rows[i][j]`` is the probability that the classifier declares type j
    when the true type is i (rows follow the frame's label order).
    """

    frame: Frame
    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self) -> None:
        rows = tuple(tuple(float(v) for v in row) for row in self.rows)
        object.__setattr__(self, "rows", rows)
        m = self.frame.size
        if len(rows) != m:
            raise FrameError("confusion matrix needs %d rows, got %d" % (m, len(rows)))
        for i, row in enumerate(rows):
            if len(row) != m:
                raise FrameError("confusion matrix row %d needs %d entries, got %d" % (i, m, len(row)))
            for value in row:
                if not isfinite(value) or not 0.0 <= value <= 1.0:
                    raise FrameError("confusion matrix row %d has entry %r outside [0, 1]" % (i, value))
            total = fsum(row)
            if abs(total - 1.0) > SUM_TOLERANCE:
                raise FrameError("confusion matrix row %d sums to %.17g, not 1" % (i, total))

    def diagonal(self, label: str) -> float:
        """Self-declaration probability of a type."""
        i = self.frame.index(label)
        return self.rows[i][i]

    def row(self, label: str) -> tuple[float, ...]:
        """Declaration distribution for a given true type."""
        return self.rows[self.frame.index(label)]


def identity_confusion(frame: Frame) -> ConfusionMatrix:
    """A perfect classifier (identity confusion matrix)."""
    m = frame.size
    return ConfusionMatrix(frame, tuple(tuple(1.0 if i == j else 0.0 for j in range(m)) for i in range(m)))


def uniform_diagonal_confusion(frame: Frame, diagonal: float) -> ConfusionMatrix:
    """A symmetric classifier: `diagonal` on the diagonal, the rest spread evenly."""
    m = frame.size
    off = (1.0 - diagonal) / (m - 1)
    return ConfusionMatrix(
        frame, tuple(tuple(diagonal if i == j else off for j in range(m)) for i in range(m))
    )


def observation_bba(decision: str, confusion: ConfusionMatrix) -> MassFunction:
    """Assignment carried by one classifier declaration.

    The declared type receives the classifier's self-declaration probability
    (the diagonal entry of the declared row); the remainder goes to total
    ignorance. Off-diagonal entries only matter for simulating declarations,
    not for interpreting them.
    """
    frame = confusion.frame
    c = confusion.diagonal(decision)
    masses: dict[int, float] = {}
    if c != 0.0:
        masses[frame.singleton(decision)] = c
    if c != 1.0:
        masses[frame.full_set] = 1.0 - c
    return MassFunction(frame, masses)


@dataclass(frozen=True)
class TrackerState:
    """Running estimate: current belief plus the number of scans consumed."""

    frame: Frame
    belief: MassFunction
    scan: int = 0


@dataclass(frozen=True)
class TrackRecord:
    """Outcome of one scan: what was declared, believed, and decided."""

    scan: int
    declared: str
    posterior: MassFunction
    decision: str


def initial_state(frame: Frame) -> TrackerState:
    """Scan-zero state: vacuous prior, nothing consumed yet."""
    return TrackerState(frame, vacuous_bba(frame), 0)


def tracker_step(
    state: TrackerState,
    declared: str,
    confusion: ConfusionMatrix,
    cfg: RuleConfig,
    criterion: DecisionCriterion = DecisionCriterion.MAX_BELIEF,
) -> tuple[TrackerState, TrackRecord]:
    """Consume one declaration: fuse, decide, advance the scan counter."""
    observation = observation_bba(declared, confusion)
    posterior = combine(cfg, state.belief, observation)
    scan = state.scan + 1
    record = TrackRecord(scan, declared, posterior, decide(posterior, criterion))
    return TrackerState(state.frame, posterior, scan), record


def run_track(
    declarations: Sequence[str],
    confusion: ConfusionMatrix,
    cfg: RuleConfig,
    criterion: DecisionCriterion = DecisionCriterion.MAX_BELIEF,
) -> list[TrackRecord]:
    """Fold :func:`tracker_step` over a declaration sequence from full ignorance.

    Returns one record per declaration. Rule failures (e.g. Dempster total
    conflict) are re-raised with the failing scan index prepended, keeping
    the concrete exception type.
    """
    if not declarations:
        raise EvidenceError("run_track: empty declaration sequence")
    state = initial_state(confusion.frame)
    records: list[TrackRecord] = []
    for declared in declarations:
        try:
            state, record = tracker_step(state, declared, confusion, cfg, criterion)
        except EvidenceError as exc:
            raise type(exc)("scan %d: %s" % (state.scan + 1, exc)) from exc
        records.append(record)
    return records
