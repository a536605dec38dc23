import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from orekrylov.algebra import Poly, RatFunc
from orekrylov.bivariate import parse_bivariate
from orekrylov.ore import DX, parse_operator
from orekrylov.parsing import parse_ratfunc
from orekrylov.ratmat import RatMatrix

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def rf(text: str) -> RatFunc:
    return parse_ratfunc(text)


def mat(rows) -> RatMatrix:
    return RatMatrix([[parse_ratfunc(e) if isinstance(e, str) else RatFunc(e) for e in r] for r in rows])


def op(text: str, kind=DX):
    return parse_operator(text, kind)


def biv(text: str):
    return parse_bivariate(text)


def polys(max_degree: int = 3, bound: int = 6):
    return st.lists(st.integers(-bound, bound), min_size=1, max_size=max_degree + 1).map(Poly)


def nonzero_polys(max_degree: int = 3, bound: int = 6):
    return polys(max_degree, bound).filter(lambda p: not p.is_zero())


def ratfuncs(max_degree: int = 3):
    return st.builds(RatFunc, polys(max_degree), nonzero_polys(max(1, max_degree - 1)))


@pytest.fixture
def rng():
    return random.Random(12345)


# one line per acceptance criterion, repeated in the terminal summary
ACCEPTANCE: dict[int, str] = {}


def report(n: int, ok: bool, detail: str) -> bool:
    line = f"criterion {n:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE[n] = line
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
