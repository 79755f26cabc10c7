"""Periodicity detection for substitution fixed points.

Constant-length inputs get a certified verdict from the period graph (every
long enough walk ending in a singleton is equivalent to periodicity).  Other
inputs rely on factor counting: a fixed point is periodic exactly when some n
has at most n factors of length n, so scanning n up to a bound either proves
periodicity (and pins the minimal period) or reports non-periodicity up to
that bound.  The bound is an explicit, configurable knob: the fully general
decision procedures for the non-constant-length case are out of scope here,
so negative verdicts from the scan are conditional rather than certified.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

from .errors import DomainError, InvariantError, PrimitivityError
from .words import Morphism, SeedPair, Word, admissible_seeds, factors_of_length, fixed_point_prefix


class PeriodicityKind(Enum):
    PERIODIC = "periodic"
    NONPERIODIC_CERTIFIED = "non-periodic"
    NONPERIODIC_UP_TO = "non-periodic-up-to-bound"


@dataclass(frozen=True)
class PeriodicityVerdict:
    kind: PeriodicityKind
    minimal_period: int | None = None
    residue_periods: tuple[int, ...] | None = None
    bound: int | None = None

    @property
    def is_periodic(self) -> bool:
        return self.kind is PeriodicityKind.PERIODIC

    @property
    def certified(self) -> bool:
        return self.kind is not PeriodicityKind.NONPERIODIC_UP_TO


def complexity(m: Morphism, seed: SeedPair, n: int) -> int:
    """Number of distinct length-n factors of the fixed point."""
    return len(factors_of_length(m, seed, n))


def _scan_minimal_period(m: Morphism, seed: SeedPair, limit: int) -> int | None:
    """First n with at most n factors of length n; that count is the minimal period."""
    for n in range(1, limit + 1):
        c = complexity(m, seed, n)
        if c <= n:
            return c
    return None


def _verified_periodic_verdict(m: Morphism, seed: SeedPair, q: int) -> PeriodicityVerdict:
    window = max(3 * q * m.profile().max_len, 3 * q)
    prefix = fixed_point_prefix(m, seed, window)
    if not _has_period(prefix, q):
        raise InvariantError(f"claimed period {q} fails on an explicit prefix")
    minimal, residue = essential_period_scan(prefix, q)
    return PeriodicityVerdict(
        kind=PeriodicityKind.PERIODIC,
        minimal_period=minimal,
        residue_periods=residue,
    )


def periodicity_test(m: Morphism, seed: SeedPair | None = None, bound: int = 64) -> PeriodicityVerdict:
    """Decide periodicity of the fixed point named by the seed.

    The constant-length route is certified in both directions; otherwise a
    complexity scan up to ``bound`` yields either a certified periodic verdict
    or a non-periodic verdict conditional on the bound.
    """
    from .words import is_primitive

    if not is_primitive(m):
        raise PrimitivityError("periodicity test needs a primitive substitution")
    if seed is None:
        seeds = admissible_seeds(m)
        if not seeds:
            raise DomainError("no admissible fixed point; analyze a power of the substitution")
        seed = seeds[0]
    profile = m.profile()
    if profile.constant_length is not None and profile.constant_length >= 2:
        from .heightgraph import all_long_walks_singleton, height, period_graph

        graph = period_graph(m, height(m, seed))
        if not all_long_walks_singleton(graph, None):
            return PeriodicityVerdict(kind=PeriodicityKind.NONPERIODIC_CERTIFIED)
        q = _scan_minimal_period(m, seed, 4096)
        if q is None:
            raise InvariantError("graph certifies periodicity but no period was found")
        return _verified_periodic_verdict(m, seed, q)
    q = _scan_minimal_period(m, seed, bound)
    if q is not None:
        return _verified_periodic_verdict(m, seed, q)
    return PeriodicityVerdict(kind=PeriodicityKind.NONPERIODIC_UP_TO, bound=bound)


def _has_period(w: Word, p: int) -> bool:
    letters = w.letters
    return all(letters[i] == letters[i + p] for i in range(len(letters) - p))


def essential_period_scan(prefix: Word, q: int):
    """Minimal divisor of q that is a period of the prefix, plus residue data.

    The prefix must be q-periodic; give it at least 2q letters when the answer
    should certify the underlying sequence and not just the window.  The second
    component gives, for each residue i below the minimal period p, the
    smallest divisor p_i of p whose class mod p_i is constant (the essential
    period of the letter at i).
    """
    if q < 1:
        raise DomainError("period must be >= 1")
    if len(prefix) < q:
        raise DomainError("prefix shorter than the period")
    if not _has_period(prefix, q):
        raise DomainError(f"prefix is not {q}-periodic")
    from . import arith

    minimal = next(p for p in arith.divisors(q) if _has_period(prefix, p))
    block = prefix.letters[:minimal]
    residue = []
    for i in range(minimal):
        p_i = next(
            p for p in arith.divisors(minimal)
            if all(block[j] == block[i] for j in range(i % p, minimal, p))
        )
        residue.append(p_i)
    return minimal, tuple(residue)
