import os
from functools import lru_cache

from hypothesis import HealthCheck, settings

from treespace.complexes import build_partition_nerve, build_tree_complex
from treespace.cycle import build_fundamental_cycle

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

GOLDEN = os.path.join(os.path.dirname(__file__), "golden")


@lru_cache(maxsize=None)
def tree_complex(n):
    return build_tree_complex(n)


@lru_cache(maxsize=None)
def nerve(n):
    return build_partition_nerve(n)


@lru_cache(maxsize=None)
def fundamental_cycle(n):
    return build_fundamental_cycle(n, tree_complex(n))


# one line per acceptance criterion, echoed at the end of the run
ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
