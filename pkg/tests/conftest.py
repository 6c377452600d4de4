import functools

import pytest
from hypothesis import settings, HealthCheck

from localduality import load_complex, fixture_path
from localduality.ainfty import construct_local_coalgebra

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@functools.lru_cache(maxsize=None)
def complex_(name):
    return load_complex(fixture_path(name))


@functools.lru_cache(maxsize=None)
def coalgebra(name, N, coproduct="strict-aw"):
    return construct_local_coalgebra(complex_(name), N, coproduct)


@pytest.fixture(params=["point", "interval", "circle"])
def small_name(request):
    return request.param


@pytest.fixture
def circle():
    return complex_("circle")


@pytest.fixture
def interval():
    return complex_("interval")


ACCEPTANCE = {}


@pytest.fixture
def criterion(request):
    """Time a criterion body and record one PASS/FAIL line for the summary."""
    import time

    class Recorder:
        def __init__(self):
            self.start = time.perf_counter()
            self.limit = None
            self.label = request.node.name

        def elapsed(self):
            return time.perf_counter() - self.start

    rec = Recorder()
    yield rec
    call = getattr(request.node, "rep_call", None)
    ok = call is not None and call.passed
    line = "%-4s %s (%.1fs)" % ("PASS" if ok else "FAIL", rec.label, rec.elapsed())
    ACCEPTANCE[request.node.name] = line
    print("\n" + line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for name in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[name])
