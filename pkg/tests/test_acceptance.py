"""Acceptance criteria 1-13, one pass/fail line each (shown in the terminal summary)."""

import subprocess
import sys
import time

import pytest

from chromalat.verify import SUITE

from conftest import ACCEPTANCE_LINES


def _report(number, ok, detail):
    line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


@pytest.mark.parametrize("number,criterion", list(enumerate(SUITE, start=1)), ids=lambda x: getattr(x, "__name__", str(x)))
def test_criterion(number, criterion):
    rec = criterion()
    _report(number, rec.ok, rec.line())
    assert rec.ok, rec.counterexample


@pytest.mark.slow
def test_criterion_13_verify_paper():
    start = time.perf_counter()
    proc = subprocess.run(
        [sys.executable, "-m", "chromalat.cli", "verify-paper"],
        capture_output=True, text=True, timeout=600,
    )
    elapsed = time.perf_counter() - start
    records = [ln for ln in proc.stdout.splitlines() if ln.startswith("[")]
    ok = proc.returncode == 0 and len(records) >= 12 and elapsed <= 600
    _report(13, ok, f"verify-paper exit {proc.returncode}, {len(records)} records, {elapsed:.1f}s")
    assert ok, proc.stdout + proc.stderr
