from __future__ import annotations

from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import strategies as st

from liegeom.forms import AltForm


def rationals(bound: int = 5, den: int = 4):
    """Small rationals ``p/q`` with ``|p| <= bound`` and ``1 <= q <= den``."""
    return st.builds(Fraction, st.integers(-bound, bound), st.integers(1, den))


def forms(dim: int, degree: int, bound: int = 5):
    keys = list(combinations(range(1, dim + 1), degree))
    return st.lists(rationals(bound), min_size=len(keys), max_size=len(keys)).map(
        lambda cs: AltForm(dim, degree, {k: c for k, c in zip(keys, cs) if c != 0})
    )


@pytest.fixture(scope="session")
def theorem_runs():
    """Verdicts per selector, computed once per session."""
    from liegeom.verify import THEOREMS, reproduce_theorem

    return {s: {v.item: v for v in reproduce_theorem(s)} for s in THEOREMS}
