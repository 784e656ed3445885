import os
import subprocess
import sys

import pytest

from lf_transfer.cli import default_lexicon_paths
from lf_transfer.lexicon import load_lexicon_files

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


@pytest.fixture(scope="session")
def lexicon():
    """The shipped sample lexicons, loaded once per test session."""
    lex, diagnostics = load_lexicon_files(default_lexicon_paths())
    assert lex is not None, [d.format() for d in diagnostics]
    assert not diagnostics
    return lex


@pytest.fixture(scope="session")
def run_cli():
    """Run the command line front end in a subprocess.

    Returns (exit status, stdout, stderr).  The default lexicon resolution
    is left alone unless the caller overrides it through ``env``.
    """

    def run(*args, env=None):
        merged = dict(os.environ)
        if env:
            merged.update(env)
        proc = subprocess.run(
            [sys.executable, "-m", "lf_transfer.cli", *args],
            capture_output=True,
            text=True,
            env=merged,
        )
        return proc.returncode, proc.stdout, proc.stderr

    return run


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


def pytest_terminal_summary(terminalreporter):
    """Echo the acceptance criterion verdicts after the test summary."""
    try:
        from test_acceptance import CRITERION_RESULTS
    except ImportError:
        return
    if CRITERION_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERION_RESULTS, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
