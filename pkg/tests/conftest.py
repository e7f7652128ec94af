from hypothesis import HealthCheck, settings, strategies as st

from buchi.words import Word

settings.register_profile(
    "default", deadline=None, max_examples=150, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

nonzero = st.integers(-6, 6).filter(bool)


@st.composite
def words(draw, max_blocks=5, exps=nonzero):
    k = draw(st.integers(0, max_blocks))
    if k == 0:
        return Word(r=draw(st.integers(0, 1)))
    return Word(draw(st.integers(0, 1)), tuple(draw(exps) for _ in range(k)), draw(st.integers(0, 1)))


triples = st.tuples(*[st.integers(-(10**12), 10**12)] * 3)
