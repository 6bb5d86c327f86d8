"""Regression corpus of deontic paradoxes and the driving scenario."""

from .runner import (
    CorpusEntry,
    EntryResult,
    corpus_path,
    golden_path,
    load_entries,
    relevel,
    run_corpus,
    run_entry,
    spec_paths,
)

__all__ = [
    "CorpusEntry",
    "EntryResult",
    "corpus_path",
    "golden_path",
    "load_entries",
    "relevel",
    "run_corpus",
    "run_entry",
    "spec_paths",
]
