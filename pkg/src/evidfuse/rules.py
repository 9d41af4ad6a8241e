"""The three combination rules under comparison: Dempster, PCR5, and TCN.

All rules consume two normalized assignments over the same frame and return
a valid :class:`~evidfuse.core.MassFunction`. None of them mutates its
inputs, and all are commutative. Per-subset accumulation uses accurately
rounded sums so that swapping the arguments yields bit-identical output.

Conflict handling is what distinguishes them:

* Dempster's rule discards the conflicting mass and rescales everything
  else by 1/(1 - K), failing loudly when K reaches 1.
* PCR5 returns each partial conflict m1(A)*m2(B) (A and B disjoint) to A
  and B in proportion to the masses that created it.
* The TCN rule replaces products with a t-norm in the conjunctive stage,
  redistributes each partial conflict using a t-norm/t-conorm ratio, and
  normalizes at the end.
"""

from __future__ import annotations

import enum
from collections import defaultdict
from dataclasses import dataclass
from math import fsum

from .core import (
    MassFunction,
    _combined,
    _require_same_frame,
    conjunctive_consensus,
)
from .errors import TotalConflictError, VanishingConsensusError
from .operators import TCONORM_FUNCS, TNORM_FUNCS, TConorm, TNorm

#: A surviving consensus at or below this counts as total conflict.
TOTAL_CONFLICT_MARGIN = 1e-12


class Rule(enum.Enum):
    """Shipped combination rules; values are the CLI spellings."""

    DEMPSTER = "dempster"
    PCR5 = "pcr5"
    TCN = "tcn"


@dataclass(frozen=True)
class RuleConfig:
    """A rule selection plus the operator pair required by TCN.

    ``tnorm``/``tconorm`` must be given exactly when ``rule`` is TCN.
    """

    rule: Rule
    tnorm: TNorm | None = None
    tconorm: TConorm | None = None

    def __post_init__(self) -> None:
        if self.rule is Rule.TCN:
            if self.tnorm is None or self.tconorm is None:
                raise ValueError("the TCN rule needs both a t-norm and a t-conorm")
        elif self.tnorm is not None or self.tconorm is not None:
            raise ValueError("t-norm/t-conorm are only meaningful for the TCN rule")

    def describe(self) -> str:
        if self.rule is Rule.TCN:
            return "tcn(%s, %s)" % (self.tnorm.value, self.tconorm.value)
        return self.rule.value


def dempster_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Dempster's rule: conjunctive consensus rescaled by 1/(1 - K).

    The divisor is computed as the surviving consensus total rather than
    literally 1 - K: the two coincide for normalized inputs, but the
    literal form amplifies the inputs' rounding drift by 1/(1 - K) at
    every step of a fusion chain, which matters under heavy conflict.

    Raises :class:`TotalConflictError` instead of dividing by (almost) zero
    when the sources are totally conflicting.
    """
    consensus = conjunctive_consensus(m1, m2)
    nonempty = consensus.nonempty()
    remaining = fsum(nonempty.values())
    if remaining <= TOTAL_CONFLICT_MARGIN:
        raise TotalConflictError(
            "total conflict between sources (K=%.17g); Dempster's rule is undefined"
            % consensus.conflict
        )
    masses = {bits: value / remaining for bits, value in nonempty.items()}
    return _combined(consensus.frame, masses, where="dempster_combine")


def pcr5_combine(m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Proportional conflict redistribution rule no. 5 for two sources.

    Starts from the conjunctive consensus; every partial conflict
    m1(A)*m2(B) with A and B disjoint is then split back onto A and B
    proportionally to m1(A) and m2(B):

        A gains m1(A)^2 m2(B) / (m1(A) + m2(B))
        B gains m2(B)^2 m1(A) / (m1(A) + m2(B))

    Pairs whose masses are both zero contribute nothing. The output is not
    renormalized: redistribution conserves mass by construction, and the
    constructor's sum audit turns any implementation error into a failure
    rather than hiding it.
    """
    frame = _require_same_frame(m1, m2)
    terms: dict[int, list[float]] = defaultdict(list)
    for a, va in m1.masses.items():
        for b, vb in m2.masses.items():
            x = a & b
            if x:
                terms[x].append(va * vb)
                continue
            denominator = va + vb
            if denominator == 0.0:
                continue
            share = va * vb / denominator
            terms[a].append(va * share)
            terms[b].append(vb * share)
    masses = {bits: fsum(values) for bits, values in terms.items()}
    return _combined(frame, masses, where="pcr5_combine")


def tcn_combine(
    m1: MassFunction,
    m2: MassFunction,
    tnorm: TNorm,
    tconorm: TConorm,
) -> MassFunction:
    """The fuzzy T-Conorm/T-Norm combination rule.

    Four steps:

    1. conjunctive consensus with the t-norm in place of the product:
       every focal pair (A, B) contributes tnorm(m1(A), m2(B)) to A&B;
    2. partial conflicts are identified (disjoint focal pairs);
    3. each conflicting pair returns mass to its two members, A gaining
       m1(A)*r and B gaining m2(B)*r with
       r = tnorm(m1(A), m2(B)) / tconorm(m1(A), m2(B))
       (a vanishing t-conorm means a vanishing t-norm, and contributes
       nothing);
    4. the result is divided by its total over nonempty subsets.

    Raises :class:`VanishingConsensusError` when step 4 would divide by
    zero, which can happen for degenerate inputs (e.g. the bounded product
    of masses that never exceed 1 pairwise).

    With the algebraic-product t-norm and the unclamped-sum t-conorm the
    steps above reproduce PCR5 exactly.
    """
    frame = _require_same_frame(m1, m2)
    tn = TNORM_FUNCS[tnorm]
    tc = TCONORM_FUNCS[tconorm]
    terms: dict[int, list[float]] = defaultdict(list)
    for a, va in m1.masses.items():
        for b, vb in m2.masses.items():
            x = a & b
            if x:
                value = tn(va, vb)
                if value != 0.0:
                    terms[x].append(value)
                continue
            denominator = tc(va, vb)
            if denominator == 0.0:
                continue
            ratio = tn(va, vb) / denominator
            if ratio != 0.0:
                terms[a].append(va * ratio)
                terms[b].append(vb * ratio)
    masses = {bits: fsum(values) for bits, values in terms.items()}
    total = fsum(masses.values())
    if total <= 0.0:
        raise VanishingConsensusError(
            "TCN consensus vanished for tnorm=%s, tconorm=%s (nothing to normalize)"
            % (tnorm.value, tconorm.value)
        )
    normalized = {bits: value / total for bits, value in masses.items()}
    return _combined(frame, normalized, where="tcn_combine")


def combine(cfg: RuleConfig, m1: MassFunction, m2: MassFunction) -> MassFunction:
    """Dispatch to the configured combination rule."""
    if cfg.rule is Rule.DEMPSTER:
        return dempster_combine(m1, m2)
    if cfg.rule is Rule.PCR5:
        return pcr5_combine(m1, m2)
    if cfg.rule is Rule.TCN:
        return tcn_combine(m1, m2, cfg.tnorm, cfg.tconorm)
    raise ValueError("unknown rule %r" % (cfg.rule,))
