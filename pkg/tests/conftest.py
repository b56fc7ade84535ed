import random

import pytest

from chantkit.model import Chant, Source, new_corpus


def make_chant(i: int, **overrides) -> Chant:
    fields = dict(
        chantlink=f"https://db.example/chant/{i}",
        incipit=f"Incipit number {i}",
        cantus_id=f"{1000 + i:06d}",
        siglum=f"A-ABC {1 + i % 3}",
        folio=f"{i:03d}r",
        srclink=f"https://db.example/source/{i % 3}",
        db="CD",
    )
    fields.update(overrides)
    return Chant(**fields)


def make_source(i: int, **overrides) -> Source:
    fields = dict(
        siglum=f"A-ABC {i}",
        srclink=f"https://db.example/source/{i}",
    )
    fields.update(overrides)
    return Source(**fields)


GENRES = ["A", "R", "In", "Of", "Co", None]
OFFICES = ["M", "L", "V", None]
FEASTS = ["Nativitas Domini", "Epiphania", "Pascha", None]
MELODIES = ["1---f--g---f---3", "1---a-b-c-d-e-f-g-h-j-k-l-m-n-o-p-q-r-s-a-b-c---4", "", None]
CURSUS = ["Secular", "Monastic", None]
CENTURIES = [(f"{n}th century", n) for n in (9, 11, 12, 13, 14, 15)] + [("", None)]
DBS = ["CD", "MMMO", "PEM"]


def random_corpus(seed: int = 7, n_chants: int = 100, n_sources: int = 12):
    """Deterministic mixed-content corpus for property and oracle tests."""
    rng = random.Random(seed)
    sources = []
    for i in range(n_sources):
        century, num = rng.choice(CENTURIES)
        sources.append(make_source(
            i,
            century=century or None,
            num_century=num,
            provenance=rng.choice(["Praha", "Paris", None]),
            cursus=rng.choice(CURSUS),
        ))
    chants = []
    for i in range(n_chants):
        src = sources[rng.randrange(n_sources)]
        chants.append(make_chant(
            i,
            srclink=src.srclink,
            siglum=src.siglum,
            db=rng.choice(DBS),
            genre=rng.choice(GENRES),
            office=rng.choice(OFFICES),
            feast=rng.choice(FEASTS),
            melody=rng.choice(MELODIES),
            cantus_id=f"{1000 + rng.randrange(40):06d}",
        ))
    return new_corpus(chants, sources, strict=True)


@pytest.fixture
def fixture_corpus():
    return random_corpus()
