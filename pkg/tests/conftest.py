import json
import os
from dataclasses import dataclass

import pytest

from jacobsthal import ProblemKind, compute_h, prime_context
from jacobsthal.cli import main as cli_main

DATA_DIR = os.path.join(os.path.dirname(__file__), "data")


def reference_rows():
    """Parsed reference table: {n: (p_n, h, bound, bound_ok)}."""
    rows = {}
    path = os.path.join(DATA_DIR, "reference_paired.csv")
    with open(path, encoding="utf-8") as fh:
        next(fh)
        for line in fh:
            n, p_n, h, bound, ok = line.strip().split(",")
            rows[int(n)] = (int(p_n), int(h), int(bound), ok == "true")
    return rows


@dataclass
class CliRun:
    code: int
    out: str
    err: str

    def json(self):
        return json.loads(self.out)


class CliRunner:
    def __init__(self, capsys):
        self._capsys = capsys

    def __call__(self, *argv) -> CliRun:
        self._capsys.readouterr()  # drop anything pending
        try:
            code = cli_main(list(argv))
        except SystemExit as exc:  # argparse errors
            code = int(exc.code or 0)
        captured = self._capsys.readouterr()
        return CliRun(code=code, out=captured.out, err=captured.err)


@pytest.fixture
def cli(capsys):
    return CliRunner(capsys)


class ResultPool:
    """Session cache of compute_h results so acceptance tests can share
    the expensive runs regardless of execution order."""

    def __init__(self):
        self._cache = {}

    def get(self, kind: ProblemKind, n: int, workers: int = 1):
        key = (kind, n, workers)
        if key not in self._cache:
            self._cache[key] = compute_h(
                prime_context(n), kind, workers=workers
            )
        return self._cache[key]


@pytest.fixture(scope="session")
def pool():
    return ResultPool()
