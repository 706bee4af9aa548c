"""Hypothesis strategies for small integer-data instances."""

from hypothesis import strategies as st

coef = st.integers(-9, 9)


@st.composite
def qp_data(draw, max_n=5, quad=None, max_rows=2):
    n = draw(st.integers(1, max_n))
    vec = st.lists(coef, min_size=n, max_size=n)
    mat = st.lists(vec, min_size=n, max_size=n)
    data = dict(c=draw(vec), Q=draw(mat))
    with_quad = draw(st.booleans()) if quad is None else quad
    if with_quad:
        data.update(h=draw(vec), G=draw(mat), g=draw(st.integers(-20, 20)))
    rows = draw(st.lists(st.tuples(vec, st.sampled_from(["<=", ">=", "="]), st.integers(-10, 10)), max_size=max_rows))
    data["x_constraints"] = rows
    return data


def oracle_args(data):
    quad = (data["h"], data["G"], data["g"]) if "h" in data else None
    return data["c"], data["Q"], quad, data["x_constraints"]
