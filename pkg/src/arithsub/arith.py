"""Exact integer helpers: gcd conventions, factorisation, valuations.

Conventions used throughout the package: gcd(0, x) = |x| and the gcd of an
empty collection is 0 (both are what ``math.gcd`` already does).
"""

from __future__ import annotations

import math

import sympy


def gcd_all(values) -> int:
    return math.gcd(*values) if values else 0


def factorize(n: int) -> dict[int, int]:
    """Prime factorisation of n >= 1 as an exponent map (1 -> {})."""
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    if n == 1:
        return {}
    return {int(p): int(e) for p, e in sympy.factorint(n).items()}


def prime_divisors(n: int) -> tuple[int, ...]:
    return tuple(sorted(factorize(n)))


def divisors(n: int) -> tuple[int, ...]:
    return tuple(int(d) for d in sympy.divisors(n))


def valuation(n: int, p: int) -> int:
    """Largest e with p**e dividing n (n != 0)."""
    if n == 0:
        raise ValueError("valuation of 0 is undefined")
    n = abs(n)
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def coprime_part(n: int, primes) -> int:
    """Largest divisor of n coprime to every prime in ``primes``."""
    for p in primes:
        while n % p == 0:
            n //= p
    return n
