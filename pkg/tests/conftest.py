from __future__ import annotations

import pytest

from synth import write_corpus_dir, write_synth_corpus

TINY_EPISODES = [
    {
        "episode_id": "ep1",
        "transcript": "The fox ran through the forest. It was quick. The owl watched from a tree.",
        "creator_description": "A quick fox runs through the forest.",
    },
    {
        "episode_id": "ep2",
        "transcript": "Coffee prices rose sharply this year. Farmers expect a hard season ahead.",
        "creator_description": "Coffee prices are rising and farmers are worried.",
    },
]

TINY_RECORDS = [
    {"episode_id": "ep1", "system_id": "R1", "summary_text": "A quick fox runs through the forest.", "grade": "G"},
    {"episode_id": "ep1", "system_id": "E1", "summary_text": "The fox ran through the forest.", "grade": "F"},
    {"episode_id": "ep1", "system_id": "A1", "summary_text": "A fox moved quickly in the woods.", "grade": "E"},
    {"episode_id": "ep2", "system_id": "R1", "summary_text": "Coffee prices are rising and farmers are worried.", "grade": "E"},
    {"episode_id": "ep2", "system_id": "E1", "summary_text": "Coffee prices rose sharply this year.", "grade": "G"},
    {"episode_id": "ep2", "system_id": "A1", "summary_text": "Higher coffee prices worry farmers.", "grade": "B"},
]

TINY_SYSTEMS = [
    {"system_id": "R1", "kind": "reference"},
    {"system_id": "E1", "kind": "extractive"},
    {"system_id": "A1", "kind": "abstractive"},
]


@pytest.fixture
def tiny_corpus_dir(tmp_path):
    return write_corpus_dir(tmp_path / "tiny", TINY_EPISODES, TINY_RECORDS, TINY_SYSTEMS)


@pytest.fixture(scope="session")
def synth_corpus_dir(tmp_path_factory):
    root = tmp_path_factory.mktemp("synth") / "corpus"
    return write_synth_corpus(root, n_episodes=10, n_abstractive=4, seed=7)
