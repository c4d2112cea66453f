import pytest
from hypothesis import strategies as st

from degenuniv.graph import Graph

_acceptance: list[tuple[str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("acceptance")
    if marker is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        status = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        _acceptance.append((marker.kwargs["id"], marker.kwargs["title"], status))


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    # parametrized criteria report once: FAIL if any case failed
    merged: dict[str, tuple[str, str]] = {}
    for cid, title, status in _acceptance:
        prev = merged.get(cid, (title, "PASS"))[1]
        merged[cid] = (title, status if prev == "PASS" else prev)
    terminalreporter.section("acceptance criteria")
    for cid in sorted(merged, key=lambda c: int(c.lstrip("AC"))):
        title, status = merged[cid]
        terminalreporter.write_line(f"{cid:<5} {status:<5} {title}")


@st.composite
def small_graphs(draw, max_n: int = 8):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    return Graph(n, [e for e, keep in zip(pairs, mask) if keep])
