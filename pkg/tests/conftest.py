import os
import re
import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.set_int_max_str_digits(0)

ROOT = Path(__file__).resolve().parent.parent
PACKS = ROOT / "packs"

settings.register_profile("default", deadline=None, derandomize=True,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

# pack directory for each (h, Q0) used in the tests
PACK_DIRS = {
    3: PACKS / "h3-a1-b2",
    10: PACKS / "h10-a-1-b3",
    2: PACKS / "h2-a-1-b1",
    -31: PACKS / "h-31-a2-b1",
    48: PACKS / "h48-a1-b7",  # n = 3 stops below the threshold with this seed
}


@pytest.fixture(scope="session")
def packs():
    from kummerprime import formats
    return {h: formats.load_pack(p) for h, p in PACK_DIRS.items()}


@pytest.fixture(scope="session")
def maps(packs):
    from kummerprime import formats
    return {h: formats.read_map(p.map_path) for h, p in packs.items()}


_CRIT = re.compile(r"test_acceptance\.py::test_criterion_(\d+)(_\w+)?")


def pytest_terminal_summary(terminalreporter):
    """One line per acceptance criterion."""
    lines = {}
    for status in ("passed", "failed", "xfailed", "xpassed", "skipped"):
        for rep in terminalreporter.stats.get(status, []):
            m = _CRIT.search(getattr(rep, "nodeid", ""))
            if not m or rep.when not in ("call", "setup"):
                continue
            if rep.when == "setup" and status == "passed":
                continue
            num, suffix = int(m.group(1)), (m.group(2) or "").lstrip("_")
            if status == "xfailed":
                word = "FAIL (known, see decisions ledger)"
            elif status == "passed":
                word = "PASS"
            else:
                word = status.upper()
            lines.setdefault(num, []).append((suffix, word))
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(lines):
        for suffix, word in lines[num]:
            label = "criterion %d" % num + (" [%s]" % suffix.replace("_", " ") if suffix else "")
            terminalreporter.write_line("%s: %s" % (label, word))
