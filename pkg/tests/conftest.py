import pytest

from fuzzproc import Universe, make_process


@pytest.fixture
def universe_abc() -> Universe:
    return Universe(("a", "b", "c"))


@pytest.fixture
def proc_p(universe_abc):
    return make_process(
        universe_abc,
        [("a", "4/5"), ("b", "1/2")],
        [("a", "2/5"), ("c", "7/10")],
    )


@pytest.fixture
def proc_q(universe_abc):
    return make_process(
        universe_abc,
        [("a", "3/5"), ("c", "9/10")],
        [("a", 1), ("b", "3/10")],
    )


FIXTURE_SCRIPT = """\
universe a b c
process p { delta: {a=4/5, b=1/2}; gamma: {a=2/5, c=7/10}; }
process q { delta: {a=3/5, c=9/10}; gamma: {a=1, b=3/10}; }
"""


@pytest.fixture
def fixture_script_path(tmp_path):
    path = tmp_path / "fixtures.fz"
    path.write_text(FIXTURE_SCRIPT, encoding="utf-8")
    return path
