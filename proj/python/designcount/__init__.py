"""Exact counts of Steiner triple systems, 1-factorizations and Latin squares,
closed-form counting bounds, and reveal-order lemma checks."""

from fractions import Fraction

from . import _core
from ._core import DesignError, __version__, bounds, cli, count, entropy, finite_sum, validate

__all__ = ["DesignError", "__version__", "bounds", "cli", "count", "entropy", "finite_sum", "validate", "verify"]


def verify(lemma, variant, n, mode="exact", samples=100000, seed=1, jobs=1):
    """Verdict rows as dicts; rational fields come back as Fraction."""
    rows = _core.verify(lemma, variant, n, mode=mode, samples=samples, seed=seed, jobs=jobs)
    for row in rows:
        for key in ("formula", "observed", "alternative"):
            if row[key] is not None:
                row[key] = Fraction(*row[key])
    return rows
