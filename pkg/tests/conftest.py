from pathlib import Path

import pytest

import vadecon

FIXTURES = Path(vadecon.__file__).parent / "fixtures"


@pytest.fixture
def tiny_dir():
    return FIXTURES / "tiny"


@pytest.fixture
def demo_dir():
    return FIXTURES / "demo"


@pytest.fixture
def write_csv(tmp_path):
    def _write(name, text):
        p = tmp_path / name
        p.write_text(text, encoding="utf-8")
        return p

    return _write


_ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture
def report(request):
    """Record one PASS/FAIL/SKIP line for the acceptance summary."""
    lines = request.config.stash.setdefault(_ACCEPTANCE, [])

    def _report(label, ok, detail=""):
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
        line = f"{label}: {status}  {detail}".rstrip()
        lines.append(line)
        print(line)

    return _report


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(_ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
