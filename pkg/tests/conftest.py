import os
import shutil

import pytest

from commands.reports import inferred_units
from commands.session import analyse
from units.core import Constraint, Provenance, Span

DATA_DIR = os.path.join(os.path.dirname(os.path.abspath(__file__)), "data")


def data_path(name: str) -> str:
    return os.path.join(DATA_DIR, name)


def constraint(lhs, rhs, line: int = 1, reason: str = "test") -> Constraint:
    return Constraint(lhs, rhs, Provenance(Span("<test>", line, 1, line, 1), reason))


@pytest.fixture
def workspace(tmp_path):
    """Copy named fixtures into a scratch directory and return their paths."""

    def copy(*names: str) -> list[str]:
        out = []
        for name in names:
            target = tmp_path / name
            shutil.copyfile(data_path(name), target)
            out.append(str(target))
        return out

    return copy


@pytest.fixture
def infer_lines():
    """`line:col unit <u> :: <name>` lines for every consistent unit of the given files."""

    def run(*paths: str, include=()) -> list[str]:
        _, analyses = analyse(list(paths), include)
        assert all(a.ok for a in analyses), "unexpected inconsistency"
        return [item.render() for a in analyses for item in inferred_units(a)]

    return run
