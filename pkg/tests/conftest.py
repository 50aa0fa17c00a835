from __future__ import annotations

import pathlib

import pytest

from sonuml.catalogue import builtin_baseline, builtin_proposed
from sonuml.uml import parse_diagram

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> pathlib.Path:
    return FIXTURES


@pytest.fixture(scope="session")
def library_model():
    return parse_diagram((FIXTURES / "library.uml").read_text())


@pytest.fixture(scope="session")
def proposed():
    return builtin_proposed()


@pytest.fixture(scope="session")
def baseline():
    return builtin_baseline()


@pytest.fixture(scope="session")
def study_csv() -> str:
    return (FIXTURES / "study.csv").read_text()
