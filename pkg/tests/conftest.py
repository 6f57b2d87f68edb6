from __future__ import annotations

from fractions import Fraction

from hypothesis import strategies as st

rationals = st.builds(
    Fraction,
    st.integers(min_value=-10**6, max_value=10**6),
    st.integers(min_value=1, max_value=10**4),
)
