"""Bundled two-mode datasets and the planted-block benchmark used by ``bench``."""
from __future__ import annotations

from importlib import resources

from .evaluate import generate_synthetic
from .io import parse_csv
from .matrix import DataMatrix

SYNTHETIC_SHAPE = (56, 50)
SYNTHETIC_BLOCKS = 4


def _load(name: str) -> DataMatrix:
    text = resources.files("bandclust.data").joinpath(name).read_text(encoding="utf-8")
    return parse_csv(text)


def southern_women() -> DataMatrix:
    """Davis, Gardner & Gardner (1941): 18 women x 14 social events, in published order."""
    return _load("southern_women.csv")


def galaskiewicz_ceos_clubs() -> DataMatrix:
    """Galaskiewicz CEOs and clubs, 26 CEOs x 15 clubs (see data/PROVENANCE.md)."""
    return _load("galaskiewicz_ceos_clubs.csv")


def synthetic(seed: int = 0, noise: float = 0.0, value_range=(1, 9)):
    """The 56 x 50, four-block planted benchmark; returns ``(matrix, truth)``."""
    m, n = SYNTHETIC_SHAPE
    return generate_synthetic(m, n, SYNTHETIC_BLOCKS, value_range, noise, seed)


BUNDLED = {
    "southern-women": southern_women,
    "galaskiewicz": galaskiewicz_ceos_clubs,
}
