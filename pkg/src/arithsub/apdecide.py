"""Decide one common difference for proper substitutions and their codings.

Given p, the spectrum descriptor reduces it to the greatest admissible
divisor p~; a constant subsequence with difference p exists exactly when one
exists with difference p~.  With an exponent m making p~ divide every
|sigma^m(a)|, the letters appearing at positions congruent to i mod p~ inside
the images sigma^m(a) form a finite set per residue; residue i is a witness
when the coded image of that set is a single letter.  The per-residue letter
sets are computed by a dynamic program over residue classes (block lengths
enter only modulo p~), never materialising sigma^m(a) itself.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .errors import DomainError, NotCodingError
from .intmat import incidence, row_power, row_vector_times
from .spectrum import SpectrumDescriptor, periodic_spectrum
from .words import Morphism, SeedPair, identity_coding

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class APWitness:
    """Certified constant arithmetic subsequence of the coded fixed point.

    Every starting index congruent to ``residue`` modulo ``reduced_difference``
    carries the same witness for the requested difference.
    """

    requested_difference: int
    reduced_difference: int
    residue: int
    letter: int
    exponent: int


def ap_exponent(reduced: int, descriptor: SpectrumDescriptor, dim: int) -> int:
    """Iteration exponent making the reduced difference divide all image lengths."""
    if not descriptor.member(reduced):
        raise DomainError(f"{reduced} is not an admissible period")
    from . import arith

    factors = arith.factorize(reduced)
    if not factors:
        return 0
    return dim * max(factors.values())


def _residue_letter_sets(m: Morphism, exponent: int, modulus: int) -> list[int]:
    """Bitmask, per residue class, of the letters of any sigma^exponent(a) there.

    Level k derives from level k-1 blockwise: position r of sigma^k(a) falls in
    block t = position of sigma(a)_t, shifted by the total length of the
    earlier blocks, and lengths only matter modulo the modulus.
    """
    d = len(m.domain)
    matrix = incidence(m)
    # sets[a][r] at level k; level 0 is the single letter a at position 0
    sets = [[1 << a if r == 0 else 0 for r in range(modulus)] for a in range(d)]
    lengths_mod = [1 % modulus] * d
    for _ in range(exponent):
        nxt = [[0] * modulus for _ in range(d)]
        for a in range(d):
            offset = 0
            for b in m.images[a]:
                prev = sets[b]
                for r in range(modulus):
                    if prev[r]:
                        nxt[a][(r + offset) % modulus] |= prev[r]
                offset = (offset + lengths_mod[b]) % modulus
        sets = nxt
        lengths_mod = [
            v % modulus for v in row_vector_times(tuple(lengths_mod), matrix)
        ]
    out = [0] * modulus
    for row in sets:
        for r in range(modulus):
            out[r] |= row[r]
    return out


def constant_ap_witnesses(
    m: Morphism,
    p: int,
    coding: Morphism | None = None,
    seed: SeedPair | None = None,
    bound: int = 64,
) -> tuple[APWitness, ...]:
    """All residues carrying a constant coded subsequence of difference p.

    Needs a primitive, left- or right-proper, non-periodic substitution (the
    spectrum computation enforces this) and a letter-to-letter coding, the
    identity by default.  An empty result certifies that no constant
    subsequence with difference p exists.
    """
    if p < 1:
        raise DomainError("the common difference must be >= 1")
    if coding is None:
        coding = identity_coding(m.domain)
    if not coding.is_coding:
        raise NotCodingError("a letter-to-letter morphism is required")
    if coding.domain != m.domain:
        raise NotCodingError("the coding must be defined on the substitution's alphabet")
    descriptor = periodic_spectrum(m, seed, bound)
    reduced = descriptor.reduce(p)
    if reduced == 1:
        return ()
    d = len(m.domain)
    exponent = ap_exponent(reduced, descriptor, d)
    matrix = incidence(m)
    escalations = 0
    while any(v % reduced for v in row_power(matrix, exponent)):
        exponent += d
        escalations += 1
        if escalations > 64:
            raise DomainError(
                f"no exponent makes {reduced} divide all image lengths; "
                "this contradicts spectrum membership"
            )
    if escalations:
        log.warning(
            "escalated the decision exponent %d times beyond its formula value", escalations
        )
    union = _residue_letter_sets(m, exponent, reduced)
    phi_bit = [1 << coding.images[a][0] for a in range(d)]
    witnesses = []
    for residue in range(reduced):
        acc = 0
        letters = union[residue]
        a = 0
        while letters:
            if letters & 1:
                acc |= phi_bit[a]
            letters >>= 1
            a += 1
        if acc and acc & (acc - 1) == 0:
            witnesses.append(
                APWitness(
                    requested_difference=p,
                    reduced_difference=reduced,
                    residue=residue,
                    letter=acc.bit_length() - 1,
                    exponent=exponent,
                )
            )
    return tuple(witnesses)
