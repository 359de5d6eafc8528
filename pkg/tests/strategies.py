from hypothesis import strategies as st

from delaygame import GameParams

cost = st.floats(min_value=0.0, max_value=100.0, allow_nan=False, allow_infinity=False)
positive_cost = st.floats(min_value=0.01, max_value=100.0, allow_nan=False, allow_infinity=False)
probability = st.floats(min_value=0.0, max_value=1.0, allow_nan=False)


@st.composite
def game_params(draw, costs=cost, tau=st.just(0.0)):
    return GameParams(*(draw(costs) for _ in range(13)), tau=draw(tau))
