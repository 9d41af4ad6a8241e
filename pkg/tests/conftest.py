"""Shared frames and mass-function generators for the test suite."""

import math

import hypothesis.strategies as st

from evidfuse import Frame, make_bba

FC_FRAME = Frame(("Fighter", "Cargo"))
ABC_FRAME = Frame(("Alpha", "Bravo", "Charlie"))

_SCALE_BITS = 12


@st.composite
def dyadic_bbas(draw, frame):
    """Masses of the form k / 2**12: float-exact and summing to exactly 1.0.

    make_bba sees a total of exactly 1.0 and keeps every mass bit-for-bit,
    which lets tests assert byte identity instead of tolerances.
    """
    subsets = list(frame.nonempty_subsets())
    total = 1 << _SCALE_BITS
    cuts = sorted(
        draw(
            st.lists(
                st.integers(0, total),
                min_size=len(subsets) - 1,
                max_size=len(subsets) - 1,
            )
        )
    )
    weights = [b - a for a, b in zip([0] + cuts, cuts + [total])]
    return make_bba(
        frame, {s: w / total for s, w in zip(subsets, weights) if w}
    )


@st.composite
def float_bbas(draw, frame):
    """Arbitrary-float masses normalized to sum to 1 within one rounding."""
    subsets = list(frame.nonempty_subsets())
    values = draw(
        st.lists(
            st.floats(0.0, 1.0, allow_nan=False),
            min_size=len(subsets),
            max_size=len(subsets),
        ).filter(lambda vs: math.fsum(vs) > 1e-3)
    )
    total = math.fsum(values)
    return make_bba(frame, {s: v / total for s, v in zip(subsets, values) if v})
