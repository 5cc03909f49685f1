"""Bundled example diagrams with pinned, test-frozen quantities.

The package ships a corpus of ``.sld`` files under ``surfskein/figures``.
Each file's header comment states the quantities the encoding must
reproduce; ``tests/test_corpus.py`` recomputes all of them, so the corpus
stays correct by construction.  The corpus is the common input of the
acceptance tests and the ``verify`` claim suite.

Names are file stems: ``fig1`` .. ``fig8`` for the worked examples,
``shadow1-type*`` / ``shadow2-type*`` for the complete 1- and 2-crossing
connected shadow families, plus ``trefoil`` and the two kink unknots.
"""

from __future__ import annotations

from collections import OrderedDict
from pathlib import Path
from typing import Union

from .diagram import Diagram, DiagramError, load_sld

# File stems in presentation order; corpus() preserves it.
CORPUS_NAMES = (
    "fig1",
    "fig3",
    "fig4-left",
    "fig4-right",
    "fig5",
    "fig6",
    "fig7",
    "fig8",
    "shadow1-type1",
    "shadow1-type2",
    "shadow2-type1",
    "shadow2-type2",
    "shadow2-type3",
    "shadow2-type4",
    "shadow2-type5",
    "trefoil",
    "kink-plus",
    "kink-minus",
)


def corpus_dir() -> Path:
    """Directory holding the bundled ``.sld`` files."""
    return Path(__file__).resolve().parent / "figures"


def corpus() -> "OrderedDict[str, Path]":
    """Map each corpus name to the path of its bundled ``.sld`` file.

    Raises ``DiagramError`` if a bundled file is missing, which would mean
    a broken installation.
    """
    base = corpus_dir()
    out: "OrderedDict[str, Path]" = OrderedDict()
    for name in CORPUS_NAMES:
        path = base / (name + ".sld")
        if not path.is_file():
            raise DiagramError("bundled corpus file missing: %s" % path)
        out[name] = path
    return out


def load(name: Union[str, Path]) -> Diagram:
    """Load a corpus diagram by name, or any ``.sld`` file by path."""
    if isinstance(name, Path):
        return load_sld(name)
    if name in CORPUS_NAMES:
        return load_sld(corpus()[name])
    path = Path(name)
    if path.suffix == ".sld" or path.exists():
        return load_sld(path)
    raise DiagramError(
        "unknown corpus name %r; known names: %s" % (name, ", ".join(CORPUS_NAMES))
    )


def corpus_diagrams() -> "OrderedDict[str, Diagram]":
    """Parse every bundled corpus file, keyed by name."""
    return OrderedDict((name, load_sld(path)) for name, path in corpus().items())


def load_directory(path: Union[str, Path]) -> "OrderedDict[str, Diagram]":
    """Parse every ``*.sld`` file in a directory, keyed by file stem.

    Used by the command-line ``--corpus`` flag so a user-supplied corpus
    directory is interchangeable with the bundled one.
    """
    base = Path(path)
    if not base.is_dir():
        raise DiagramError("corpus directory not found: %s" % base)
    out: "OrderedDict[str, Diagram]" = OrderedDict()
    for file in sorted(base.glob("*.sld")):
        out[file.stem] = load_sld(file)
    if not out:
        raise DiagramError("no .sld files in corpus directory: %s" % base)
    return out
