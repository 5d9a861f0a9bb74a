import sys
from pathlib import Path

from hypothesis import settings, strategies as st

sys.path.insert(0, str(Path(__file__).parent))

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@st.composite
def perms(draw, min_n=1, max_n=7):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    return tuple(draw(st.permutations(range(1, n + 1))))


@st.composite
def partitions(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_value=min_n, max_value=max_n))
    parts, left = [], n
    while left:
        p = draw(st.integers(min_value=1, max_value=min(left, parts[-1] if parts else left)))
        parts.append(p)
        left -= p
    return tuple(parts)


@st.composite
def distinct_words(draw, max_len=8):
    return tuple(draw(st.lists(st.integers(min_value=-50, max_value=50), unique=True, max_size=max_len)))
