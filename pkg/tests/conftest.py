from __future__ import annotations

from pathlib import Path

import pytest

from mapmix.resources import load_default

FIXTURES = Path(__file__).parent / "data"


@pytest.fixture(scope="session")
def resources():
    return load_default()


@pytest.fixture(scope="session")
def lex(resources):
    return resources.lexicon


@pytest.fixture(scope="session")
def lid(resources):
    return resources.lid


@pytest.fixture(scope="session")
def adjectives(resources):
    return resources.adjectives
