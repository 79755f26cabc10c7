"""Brute-force certificates over explicit prefixes.

These scans are deliberately independent of the decision machinery: they look
at actual letters of a materialised prefix.  A Constant status over a finite
window is evidence, not proof; proofs come from the decision modules.  A
Violated status, by contrast, is a hard counterexample.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError
from .words import Word, factors_of_length


@dataclass(frozen=True)
class ResidueStatus:
    """Outcome of scanning one residue class: a constant letter, or the
    earliest pair of positions in the class carrying different letters."""

    residue: int
    letter: int | None
    violation: tuple[int, int] | None
    positions_scanned: int

    @property
    def is_constant(self) -> bool:
        return self.violation is None


def default_scan_length(p: int, block_length: int = 1) -> int:
    """Scan window covering several substitution blocks at the decision exponent."""
    return max(10**4, 20 * p * block_length)


def prefix_ap_scan(w: Word, p: int) -> tuple[ResidueStatus, ...]:
    """Scan every residue class mod p of an explicit word.

    Each class must get at least two samples, hence the window must be at
    least 2p long.  Violations record the first position of the class and the
    first later position disagreeing with it.
    """
    if p < 1:
        raise DomainError("the common difference must be >= 1")
    if len(w) < 2 * p:
        raise DomainError("scan window shorter than twice the difference")
    letters = w.letters
    out = []
    for k in range(p):
        first = letters[k]
        violation = None
        scanned = 0
        for pos in range(k, len(letters), p):
            scanned += 1
            if violation is None and letters[pos] != first:
                violation = (k, pos)
        if violation is None:
            out.append(ResidueStatus(k, first, None, scanned))
        else:
            out.append(ResidueStatus(k, None, violation, scanned))
    return tuple(out)


def factor_intersection(first, second, n: int) -> int:
    """Cardinality of the shared length-n factor sets of two fixed points.

    Both arguments are (morphism, seed) pairs; sequences generated by
    spectrally incompatible systems share only finitely many factors, so this
    count collapsing to 0 as n grows is the expected desk-scale picture.
    """
    m1, seed1 = first
    m2, seed2 = second
    f1 = {w.tokens() for w in factors_of_length(m1, seed1, n)}
    f2 = {w.tokens() for w in factors_of_length(m2, seed2, n)}
    return len(f1 & f2)
