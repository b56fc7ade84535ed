"""Character-class model of the Volpiano melody encoding.

The character-class table below is this toolkit's documented convention
(Volpiano itself is a font-based encoding without a single normative
published table). Accidentals are deliberately excluded from note counts:
they modify a pitch rather than add one. Corrections to the convention
require editing only the CHAR_CLASSES constant.
"""

from __future__ import annotations

import enum
import re


class VolpianoCharClass(enum.Enum):
    CLEF = "clef"
    PITCH = "pitch"
    LIQUESCENT_PITCH = "liquescent_pitch"
    ACCIDENTAL = "accidental"
    BARLINE = "barline"
    SYLLABLE_HYPHEN = "syllable_hyphen"
    MISSING_PITCH_MARKER = "missing_pitch_marker"
    OTHER = "other"


# Single source of truth for the encoding convention.
CHAR_CLASSES: dict[VolpianoCharClass, frozenset[str]] = {
    VolpianoCharClass.CLEF: frozenset("12"),
    # '8' and '9' are the low pitches below 'a'; 'i' is reserved for flats.
    VolpianoCharClass.PITCH: frozenset("89abcdefghjklmnopqrs"),
    VolpianoCharClass.LIQUESCENT_PITCH: frozenset("ABCDEFGHJKLMNOPQRS"),
    VolpianoCharClass.ACCIDENTAL: frozenset("iyzIYZwWxX"),
    VolpianoCharClass.BARLINE: frozenset("34"),
    VolpianoCharClass.SYLLABLE_HYPHEN: frozenset("-"),
    VolpianoCharClass.MISSING_PITCH_MARKER: frozenset("6"),
}

_CLASS_OF: dict[str, VolpianoCharClass] = {
    c: cls for cls, chars in CHAR_CLASSES.items() for c in chars
}

_NOTE_CHARS = (
    CHAR_CLASSES[VolpianoCharClass.PITCH] | CHAR_CLASSES[VolpianoCharClass.LIQUESCENT_PITCH]
)

_HYPHEN_RUN = re.compile(r"-{4,}")


def classify_char(c: str) -> VolpianoCharClass:
    """Map a single character to its Volpiano class (total function)."""
    return _CLASS_OF.get(c, VolpianoCharClass.OTHER)


def count_notes(melody: str) -> int:
    """Number of note-bearing characters (pitches and liquescent pitches)."""
    return sum(1 for c in melody if c in _NOTE_CHARS)


def clean_melody(melody: str) -> str:
    """Drop unclassified characters and collapse runs of 4+ hyphens to 3.

    Idempotent; never changes the note count.
    """
    kept = "".join(c for c in melody if classify_char(c) is not VolpianoCharClass.OTHER)
    return _HYPHEN_RUN.sub("---", kept)
