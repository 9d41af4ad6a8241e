"""Fuzzy conjunction (t-norm) and disjunction (t-conorm) operators on [0, 1].

The shipped operators are a closed enumeration, so the axiom test suite can
cover every variant exhaustively. Each t-norm is associative, commutative,
monotone, and satisfies the boundary conditions T(0, 0) = 0 and T(x, 1) = x.

Note that :attr:`TConorm.SUM` is the *unclamped* arithmetic sum, which leaves
[0, 1] for x + y > 1. That is deliberate: only the unclamped sum makes the
TCN rule with the algebraic-product t-norm reduce exactly to PCR5's
proportional conflict split. A bounded sum is intentionally not offered.
"""

from __future__ import annotations

import enum


class TNorm(enum.Enum):
    """Shipped t-norm variants; values are the CLI spellings."""

    MIN = "min"
    PRODUCT = "product"
    BOUNDED = "bounded"


class TConorm(enum.Enum):
    """Shipped t-conorm variants; values are the CLI spellings."""

    MAX = "max"
    SUM = "sum"


def _min(x: float, y: float) -> float:
    return x if x < y else y


def _product(x: float, y: float) -> float:
    return x * y


def _bounded_product(x: float, y: float) -> float:
    return max(0.0, x + y - 1.0)


def _max(x: float, y: float) -> float:
    return x if x > y else y


def _sum(x: float, y: float) -> float:
    return x + y


# Dispatch tables; rule internals use these directly to skip re-validation.
TNORM_FUNCS = {
    TNorm.MIN: _min,
    TNorm.PRODUCT: _product,
    TNorm.BOUNDED: _bounded_product,
}

TCONORM_FUNCS = {
    TConorm.MAX: _max,
    TConorm.SUM: _sum,
}


def _check_unit(name: str, value: float) -> float:
    value = float(value)
    if not 0.0 <= value <= 1.0:
        raise ValueError("%s=%r is outside [0, 1]" % (name, value))
    return value


def tnorm_eval(kind: TNorm, x: float, y: float) -> float:
    """Evaluate a t-norm at (x, y), both in [0, 1].

    MIN gives min(x, y), PRODUCT gives x*y, and BOUNDED gives
    max(0, x + y - 1); every result lies in [0, min(x, y)].
    """
    return TNORM_FUNCS[kind](_check_unit("x", x), _check_unit("y", y))


def tconorm_eval(kind: TConorm, x: float, y: float) -> float:
    """Evaluate a t-conorm at (x, y), both in [0, 1].

    MAX stays in [0, 1]; SUM is the unclamped x + y in [0, 2] (see module
    docstring). Either dominates every shipped t-norm at the same point.
    """
    return TCONORM_FUNCS[kind](_check_unit("x", x), _check_unit("y", y))


def parse_tnorm(name: str) -> TNorm:
    """Map a CLI spelling ("min", "product", "bounded") to a t-norm."""
    try:
        return TNorm(name.strip().lower())
    except ValueError:
        raise ValueError(
            "unknown t-norm %r (choose from %s)" % (name, ", ".join(k.value for k in TNorm))
        ) from None


def parse_tconorm(name: str) -> TConorm:
    """Map a CLI spelling ("max", "sum") to a t-conorm."""
    try:
        return TConorm(name.strip().lower())
    except ValueError:
        raise ValueError(
            "unknown t-conorm %r (choose from %s)" % (name, ", ".join(k.value for k in TConorm))
        ) from None
