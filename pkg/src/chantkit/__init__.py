"""Toolkit for loading, cleaning, filtering and analyzing Gregorian chant
catalogue corpora (chants.csv / sources.csv snapshots), with a replicable
filter mechanism and a fuzzy Cantus-ID linkage pipeline for external data."""

__version__ = "0.1.0"

from chantkit.model import Chant, Corpus, HistoryEntry, Melody, Source, new_corpus

__all__ = [
    "Chant",
    "Corpus",
    "HistoryEntry",
    "Melody",
    "Source",
    "new_corpus",
]
