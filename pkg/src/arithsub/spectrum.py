"""Periodic spectrum of the subshift generated by a primitive substitution.

The spectrum is presented finitely: a set of primes with unbounded exponent
and a map of remaining primes to exponent caps.  An integer p belongs to the
spectrum exactly when it is a product of infinite-exponent primes (any power)
and capped primes within their caps; the set is closed under divisors and lcm.

Three routes produce a descriptor:

* gcd analysis of the exact row powers 1*M^(nd) for proper substitutions,
* the height formula (divisors of h * l^n) for constant-length substitutions,
* the determinant/trace shortcut for two-letter non-constant-length inputs,
  kept as an independent cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import arith
from .errors import (
    DomainError,
    InvariantError,
    PeriodicInputError,
    PrimitivityError,
    ProperRequiredError,
)
from .intmat import IntMatrix, incidence, is_primitive, minimal_recurrence, row_power, row_vector_times
from .words import Morphism, SeedPair, admissible_seeds


@dataclass(frozen=True)
class SpectrumDescriptor:
    """Finite presentation of the set of admissible periods.

    ``infinite`` lists primes whose every power is a period; ``bounded`` maps
    the remaining period primes to their maximal exponents.  1 is always a
    member (the trivial period).
    """

    infinite: frozenset[int]
    bounded: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "bounded", tuple(sorted(self.bounded)))
        keys = [q for q, _ in self.bounded]
        if len(set(keys)) != len(keys):
            raise DomainError("duplicate bounded prime")
        if set(keys) & self.infinite:
            raise DomainError("a prime cannot be both bounded and infinite")
        if any(cap < 1 for _, cap in self.bounded):
            raise DomainError("exponent caps must be >= 1")

    @property
    def bounded_map(self) -> dict[int, int]:
        return dict(self.bounded)

    @property
    def trivial(self) -> bool:
        return not self.infinite and not self.bounded

    def reduce(self, p: int) -> int:
        """Greatest divisor of p that is an admissible period."""
        if p < 1:
            raise DomainError("periods are positive integers")
        caps = self.bounded_map
        out = 1
        for prime, mult in arith.factorize(p).items():
            if prime in self.infinite:
                out *= prime ** mult
            elif prime in caps:
                out *= prime ** min(mult, caps[prime])
        return out

    def member(self, p: int) -> bool:
        return self.reduce(p) == p

    def elements_upto(self, limit: int) -> tuple[int, ...]:
        """All members <= limit, in increasing order (1 included)."""
        values = {1}
        for q, cap in self.bounded:
            grown = set()
            for v in values:
                w = v
                for _ in range(cap):
                    w *= q
                    if w > limit:
                        break
                    grown.add(w)
            values |= grown
        for prime in sorted(self.infinite):
            grown = set()
            for v in values:
                w = v * prime
                while w <= limit:
                    grown.add(w)
                    w *= prime
            values |= grown
        return tuple(sorted(values))


@dataclass(frozen=True)
class StepThreeTrace:
    """Record of the gcd-stabilisation loop that bounds capped prime powers.

    ``entries`` holds (n, g_n, gtilde_n) where g_n is the gcd of the entries
    of 1*M^(nd) and gtilde_n its largest divisor coprime to every
    infinite-exponent prime; the loop stops at the first n with
    gtilde_n = gtilde_{n+1}, certified afterwards by a window of dim+1
    consecutive raw powers holding each capped valuation constant.
    """

    entries: tuple[tuple[int, int, int], ...]
    stop_index: int
    hard_cap: int
    k_bound: int
    q_max: int
    caps: tuple[tuple[int, int], ...]


def _gate(m: Morphism, seed, bound: int, require_proper: bool):
    """Common preconditions of the spectrum computations."""
    from .periodicity import periodicity_test

    if not m.is_endomorphism:
        raise DomainError("spectrum analysis needs an endomorphism")
    if m.is_erasing:
        raise DomainError("spectrum analysis rejects erasing morphisms")
    if not is_primitive(incidence(m)):
        raise PrimitivityError("spectrum analysis needs a primitive substitution")
    if seed is None:
        seeds = admissible_seeds(m)
        if not seeds:
            raise DomainError("no admissible fixed point; analyze a power of the substitution")
        seed = seeds[0]
    profile = m.profile()
    verdict = periodicity_test(m, seed, bound)
    if verdict.is_periodic:
        raise PeriodicInputError(
            "the fixed point is periodic; use the periodicity analysis instead"
        )
    if require_proper and not profile.is_proper:
        raise ProperRequiredError(
            "this computation needs a left- or right-proper substitution"
        )
    return profile, seed, verdict


def _prime_periods_of(matrix: IntMatrix) -> frozenset[int]:
    g = arith.gcd_all(row_power(matrix, matrix.dim))
    return frozenset(arith.prime_divisors(g)) if g > 1 else frozenset()


def prime_periods(m: Morphism, seed: SeedPair | None = None, bound: int = 64) -> frozenset[int]:
    """Primes that are admissible periods: divisors of gcd(|sigma^d(a)|, a in A)."""
    _gate(m, seed, bound, require_proper=True)
    return _prime_periods_of(incidence(m))


def _infinite_of(matrix: IntMatrix, pp: frozenset[int]) -> frozenset[int]:
    rec = minimal_recurrence(matrix)
    g = arith.gcd_all(rec.coeffs)
    if g <= 1:
        return frozenset()
    return frozenset(arith.prime_divisors(g)) & pp


def infinite_primes(m: Morphism, seed: SeedPair | None = None, bound: int = 64) -> frozenset[int]:
    """Period primes whose every power is a period (gcd of the recurrence coefficients)."""
    _gate(m, seed, bound, require_proper=True)
    matrix = incidence(m)
    return _infinite_of(matrix, _prime_periods_of(matrix))


def _step_three(matrix: IntMatrix, infinite: frozenset[int], candidates: frozenset[int]) -> StepThreeTrace:
    d = matrix.dim
    q_max = max(candidates)
    max_col = max(matrix.column_sums())
    k_bound = 1
    while q_max ** k_bound <= max_col:
        k_bound += 1
    hard_cap = k_bound * q_max ** d + d

    block = matrix.power(d)
    entries = []
    v = (1,) * d
    prev_tilde = None
    stop = None
    for n in range(1, hard_cap + 1):
        v = row_vector_times(v, block)
        g = arith.gcd_all(v)
        g_tilde = arith.coprime_part(g, infinite)
        entries.append((n, g, g_tilde))
        if prev_tilde is not None and g_tilde == prev_tilde:
            stop = n - 1
            break
        prev_tilde = g_tilde
    if stop is None:
        raise InvariantError("gcd sequence failed to stabilize within its proven bound")

    stable = entries[stop - 1][2]
    caps = arith.factorize(stable)
    if set(caps) != set(candidates):
        raise InvariantError(
            f"stabilized gcd {stable} does not factor over the candidate primes {sorted(candidates)}"
        )
    _certify_caps(matrix, caps, hard_cap)
    return StepThreeTrace(
        entries=tuple(entries),
        stop_index=stop,
        hard_cap=hard_cap,
        k_bound=k_bound,
        q_max=q_max,
        caps=tuple(sorted(caps.items())),
    )


def _certify_caps(matrix: IntMatrix, caps: dict[int, int], hard_cap: int):
    """Defensive re-derivation of each cap from consecutive raw powers.

    The valuation of gcd(1*M^j) in a fixed prime is non-decreasing in j, and
    once it holds the same value for dim+1 consecutive powers it can never
    grow again; that plateau value must match the stabilised cap.
    """
    d = matrix.dim
    pending = dict(caps)
    runs = {q: (None, 0) for q in caps}  # value, run length
    v = (1,) * d
    for _ in range(d * (hard_cap + 1) + d + 1):
        v = row_vector_times(v, matrix)
        g = arith.gcd_all(v)
        for q in list(pending):
            val = arith.valuation(g, q) if g else None
            if val is None:
                raise InvariantError("zero gcd while certifying caps")
            prev, run = runs[q]
            run = run + 1 if val == prev else 1
            runs[q] = (val, run)
            if run == d + 1:
                if val != pending[q]:
                    raise InvariantError(
                        f"certified exponent {val} for prime {q} disagrees with stabilized cap {pending[q]}"
                    )
                del pending[q]
        if not pending:
            return
    raise InvariantError("cap certification did not converge within its proven bound")


def bounded_exponents(
    m: Morphism,
    pp: frozenset[int],
    pp_inf: frozenset[int],
    seed: SeedPair | None = None,
    bound: int = 64,
) -> dict[int, int]:
    """Exponent caps for the period primes outside the infinite set."""
    _gate(m, seed, bound, require_proper=True)
    candidates = frozenset(pp) - frozenset(pp_inf)
    if not candidates:
        return {}
    trace = _step_three(incidence(m), frozenset(pp_inf), candidates)
    return dict(trace.caps)


def step_three_trace(
    m: Morphism, seed: SeedPair | None = None, bound: int = 64
) -> StepThreeTrace | None:
    """Diagnostic trace of the stabilisation loop (None when no capped primes exist)."""
    _gate(m, seed, bound, require_proper=True)
    matrix = incidence(m)
    pp = _prime_periods_of(matrix)
    infinite = _infinite_of(matrix, pp)
    candidates = pp - infinite
    if not candidates:
        return None
    return _step_three(matrix, infinite, candidates)


def periodic_spectrum(
    m: Morphism, seed: SeedPair | None = None, bound: int = 64
) -> SpectrumDescriptor:
    """Spectrum descriptor for a primitive non-periodic substitution.

    Constant-length inputs use the height formula (and need not be proper);
    otherwise the substitution must be left- or right-proper.
    """
    profile, seed, _ = _gate(m, seed, bound, require_proper=False)
    if profile.constant_length is not None:
        from .heightgraph import height

        hd = height(m, seed)
        return constant_length_spectrum(profile.constant_length, hd.height)
    if not profile.is_proper:
        raise ProperRequiredError(
            "this computation needs a left- or right-proper substitution"
        )
    matrix = incidence(m)
    pp = _prime_periods_of(matrix)
    if not pp:
        return SpectrumDescriptor(frozenset(), ())
    infinite = _infinite_of(matrix, pp)
    candidates = pp - infinite
    caps: dict[int, int] = {}
    if candidates:
        caps = dict(_step_three(matrix, infinite, candidates).caps)
    return SpectrumDescriptor(infinite, tuple(sorted(caps.items())))


def constant_length_spectrum(length: int, height: int) -> SpectrumDescriptor:
    """Divisors of height * length^n: length primes unbounded, height primes capped."""
    if length < 2:
        raise DomainError("constant length must be >= 2")
    if height < 1 or math.gcd(height, length) != 1:
        raise DomainError("height must be >= 1 and coprime to the length")
    return SpectrumDescriptor(
        infinite=frozenset(arith.prime_divisors(length)),
        bounded=tuple(sorted(arith.factorize(height).items())),
    )


def two_letter_spectrum(
    m: Morphism, seed: SeedPair | None = None, bound: int = 64
) -> SpectrumDescriptor:
    """Determinant/trace shortcut for two-letter non-constant-length substitutions.

    Periods are the divisors of w * r^n with r = gcd(det M, trace M) and w
    collecting the primes of the two image lengths that do not divide r, with
    their exponents in the difference of the lengths.
    """
    profile, _, _ = _gate(m, seed, bound, require_proper=False)
    if len(m.domain) != 2:
        raise DomainError("this shortcut needs a two-letter alphabet")
    if profile.constant_length is not None:
        raise DomainError("this shortcut needs a non-constant-length substitution")
    matrix = incidence(m)
    r = math.gcd(matrix.determinant(), matrix.trace())
    len0, len1 = len(m.images[0]), len(m.images[1])
    delta = abs(len0 - len1)
    bounded = {}
    for prime in sorted(set(arith.prime_divisors(len0)) | set(arith.prime_divisors(len1))):
        if r % prime == 0:
            continue
        e = arith.valuation(delta, prime)
        if e:
            bounded[prime] = e
    infinite = frozenset(arith.prime_divisors(r)) if r > 1 else frozenset()
    return SpectrumDescriptor(infinite, tuple(sorted(bounded.items())))
