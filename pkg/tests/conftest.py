import os
from fractions import Fraction

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

settings.register_profile(
    "repo",
    derandomize=True,
    deadline=None,
    max_examples=int(os.environ.get("HYPOTHESIS_EXAMPLES", "60")),
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


def rationals(max_den=4, lo=0, hi=12):
    return st.integers(1, max_den).flatmap(
        lambda d: st.integers(lo * d, hi * d).map(lambda u: Fraction(u, d))
    )


def domains(dims=(2, 3), max_m=4):
    from bergman_toeplitz import DomainSpec

    return st.sampled_from(dims).flatmap(
        lambda n: st.tuples(*[st.integers(1, max_m)] * n).map(DomainSpec)
    )


def indices(n, hi=4):
    return st.tuples(*[st.integers(0, hi)] * n)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
