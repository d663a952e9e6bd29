"""Parametric families and deterministic sampling."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import count, product
from math import gcd
from typing import Iterator, Mapping, Union

from ..curvature import Metric
from ..forms import AltForm, pfaffian
from ..linalg import det
from ..scalar import Poly, RationalFunction, Scalar, evaluate, free_parameters, numer_denom, scalar_str
from ..structures import Endomorphism

__all__ = [
    "Family",
    "FamilyError",
    "Instance",
    "SamplingError",
    "auto_constraints",
    "sample_family",
    "sample_sequence",
]

FamilyObject = Union[AltForm, Endomorphism, Metric]

# Assignments tried before giving up; prefix of the sample sequence used per parameter.
SEARCH_BUDGET = 50_000
_PREFIX = 12


class FamilyError(ValueError):
    """Undeclared parameter or a constraint that vanishes identically."""


class SamplingError(RuntimeError):
    """No assignment satisfying every constraint within the search budget."""


def _entries(obj: FamilyObject) -> list[Scalar]:
    if isinstance(obj, AltForm):
        return list(obj.coeffs.values())
    return [x for r in obj.matrix for x in r]


def _parameters(obj: FamilyObject) -> frozenset[str]:
    out: frozenset[str] = frozenset()
    for x in _entries(obj):
        out |= free_parameters(x)
    return out


def auto_constraints(obj: FamilyObject) -> tuple[Scalar, ...]:
    """Entry denominators plus the nondegeneracy numerator (Pfaffian for 2-forms, det for metrics)."""
    seen: list[Scalar] = []
    for x in _entries(obj):
        if isinstance(x, RationalFunction):
            d = x.den
            if d not in seen:
                seen.append(d)
    nondeg = None
    if isinstance(obj, AltForm) and obj.degree == 2:
        nondeg = pfaffian(obj.matrix())
    elif isinstance(obj, Metric):
        nondeg = det(obj.matrix)
    if nondeg is not None:
        num, _ = numer_denom(nondeg)
        if isinstance(num, Poly) and num not in seen:
            seen.append(num)
        elif num == 0:
            seen.append(0)
    return tuple(seen)


@dataclass(frozen=True)
class Family:
    """A parametric object together with the polynomials that must not vanish."""

    name: str
    algebra: str
    obj: FamilyObject
    params: tuple[str, ...]
    constraints: tuple[Scalar, ...] = ()
    provenance: str = ""

    def __post_init__(self):
        undeclared = _parameters(self.obj) - set(self.params)
        if undeclared:
            raise FamilyError(f"family {self.name!r}: undeclared parameters {sorted(undeclared)}")
        for c in self.constraints:
            if c == 0:
                raise FamilyError(f"family {self.name!r}: a constraint vanishes identically")

    @classmethod
    def of(cls, name: str, algebra: str, obj: FamilyObject, *, params=None, extra=(), provenance: str = "") -> Family:
        """Family whose constraints are derived from ``obj`` (see ``auto_constraints``)."""
        ps = tuple(sorted(_parameters(obj))) if params is None else tuple(params)
        return cls(name, algebra, obj, ps, auto_constraints(obj) + tuple(extra), provenance)

    def constraint_strings(self) -> list[str]:
        return [scalar_str(c) for c in self.constraints]


def sample_sequence() -> Iterator[Fraction]:
    """``1, -1, 2, -2, 1/2, -1/2, 3, -3, 1/3, -1/3, 3/2, -3/2, 2/3, ...`` ordered by height."""
    for h in count(1):
        if h == 1:
            yield Fraction(1)
            yield Fraction(-1)
            continue
        for q in range(1, h):
            if gcd(h, q) != 1:
                continue
            for x in (Fraction(h, q), Fraction(q, h)):
                yield x
                yield -x


def _prefix(k: int) -> list[Fraction]:
    it = sample_sequence()
    return [next(it) for _ in range(k)]


def _assignments(k: int) -> Iterator[tuple[int, ...]]:
    """Index tuples ordered by shells of growing maximum index, lexicographic within a shell."""
    for m in range(_PREFIX):
        for t in product(range(m + 1), repeat=k):
            if max(t, default=0) == m:
                yield t
        if k == 0:
            return


def _demote(x: Fraction):
    return x.numerator if x.denominator == 1 else x


def _satisfies(constraints, values: Mapping[str, object]) -> bool:
    for c in constraints:
        try:
            if evaluate(c, values) == 0:
                return False
        except ZeroDivisionError:
            return False
    return True


@dataclass(frozen=True)
class Instance:
    family: str
    seed: int
    values: dict[str, Scalar]
    obj: FamilyObject = field(repr=False)

    def values_str(self) -> dict[str, str]:
        return {k: scalar_str(v) for k, v in self.values.items()}


def sample_assignment(f: Family, seed: int = 0, budget: int = SEARCH_BUDGET) -> dict[str, Scalar]:
    """The ``seed``-th constraint-respecting assignment (0-based) in the deterministic order."""
    if seed < 0:
        raise ValueError("seed must be non-negative")
    seq = _prefix(_PREFIX)
    hits = 0
    for tried, idx in enumerate(_assignments(len(f.params))):
        if tried >= budget:
            break
        values = {p: _demote(seq[i]) for p, i in zip(f.params, idx)}
        if _satisfies(f.constraints, values):
            if hits == seed:
                return values
            hits += 1
    raise SamplingError(f"family {f.name!r}: no valid assignment for seed {seed} within {budget} tries")


def sample_family(f: Family, seed: int = 0, budget: int = SEARCH_BUDGET) -> Instance:
    values = sample_assignment(f, seed, budget)
    return Instance(f.name, seed, values, f.obj.substitute(values))
