"""Hypothesis strategies shared by the test modules."""
from hypothesis import strategies as st

from supertropical.bipotent import BipotentElem
from supertropical.core import SupertropicalElem

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
nonzero_rationals = rationals.filter(lambda q: q != 0)
group_values = st.fractions(min_value=-20, max_value=20, max_denominator=4)

bipotent_elements = st.one_of(st.just(BipotentElem.zero()), group_values.map(BipotentElem))

supertropical_elements = st.one_of(
    st.just(SupertropicalElem.zero()),
    group_values.map(SupertropicalElem.tangible),
    group_values.map(SupertropicalElem.ghost),
)

# Small e-value ranges make ties, and hence ghosts, frequent.
tied_elements = st.one_of(
    st.just(SupertropicalElem.zero()),
    st.integers(-2, 2).map(SupertropicalElem.tangible),
    st.integers(-2, 2).map(SupertropicalElem.ghost),
)
