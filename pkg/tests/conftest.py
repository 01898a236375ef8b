"""Shared fixture-corpus handles and the session-wide frame sweep."""

import time
from types import SimpleNamespace

import pytest

from modalstone import jsonio
from modalstone.spaces import SpaceMorphism
from modalstone.sweep import frame_duality_sweep

FRAME_NAMES = ("chain3-id", "chain3-top", "convex", "serial")
SPACE_NAMES = ("s1", "discrete2", "doubled")


@pytest.fixture(scope="session")
def corpus_frames():
    return {name: jsonio.fixture_object(f"{name}.frame.json")
            for name in FRAME_NAMES}


@pytest.fixture(scope="session")
def corpus_spaces():
    return {name: jsonio.fixture_object(f"{name}.space.json")
            for name in SPACE_NAMES}


@pytest.fixture(scope="session")
def s1(corpus_spaces):
    return corpus_spaces["s1"]


@pytest.fixture(scope="session")
def discrete2(corpus_spaces):
    return corpus_spaces["discrete2"]


@pytest.fixture(scope="session")
def doubled(corpus_spaces):
    return corpus_spaces["doubled"]


@pytest.fixture(scope="session")
def chain3_id(corpus_frames):
    return corpus_frames["chain3-id"]


@pytest.fixture(scope="session")
def chain3_top(corpus_frames):
    return corpus_frames["chain3-top"]


@pytest.fixture(scope="session")
def corpus_space_morphisms(corpus_spaces):
    """The shipped point maps, keyed by fixture stem."""
    def build(name, src, tgt):
        _, doc = jsonio.fixture_doc(f"{name}.space-morphism.json")
        return SpaceMorphism(corpus_spaces[src], corpus_spaces[tgt], doc["map"])
    return {"s1-id": build("s1-id", "s1", "s1"),
            "s1-collapse": build("s1-collapse", "s1", "s1"),
            "fold": build("fold", "doubled", "s1")}


@pytest.fixture(scope="session")
def sweep5():
    """One full exhaustive sweep over lattices with at most 5 elements.

    Several acceptance criteria read different stages of the same run, so
    it is computed once per session, with its wall time kept alongside.
    """
    start = time.monotonic()
    report = frame_duality_sweep(5)
    return SimpleNamespace(report=report, seconds=time.monotonic() - start)
