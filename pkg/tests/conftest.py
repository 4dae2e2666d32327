"""Shared test configuration.

Provides the acceptance-criteria recorder: acceptance tests register one
verdict line per criterion, and a terminal-summary hook prints the block
`[PASS]/[FAIL] criterion N: ...` (one line per criterion) after the run.
"""

from __future__ import annotations

import collections

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repro",
    settings(
        derandomize=True,
        max_examples=50,
        deadline=None,
        suppress_health_check=[HealthCheck.too_slow],
    ),
)
settings.load_profile("repro")

N_CRITERIA = 10

# criterion number -> list of (ok, detail) entries; a criterion may record
# several clauses, and it passes only if every clause passed.
_RESULTS: dict[int, list[tuple[bool, str]]] = collections.defaultdict(list)


def record_criterion(num: int, ok: bool, detail: str) -> None:
    assert 1 <= num <= N_CRITERIA
    _RESULTS[num].append((bool(ok), detail))


@pytest.fixture
def record():
    """Recorder handle for acceptance tests."""
    return record_criterion


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    tr = terminalreporter
    tr.ensure_newline()
    tr.section("acceptance criteria")
    for num in range(1, N_CRITERIA + 1):
        entries = _RESULTS.get(num)
        if not entries:
            tr.write_line(
                f"[FAIL] criterion {num}: no result recorded "
                "(acceptance test did not run to completion)"
            )
            continue
        ok = all(flag for flag, _ in entries)
        detail = "; ".join(text for _, text in entries)
        tr.write_line(f"[{'PASS' if ok else 'FAIL'}] criterion {num}: {detail}")
