"""Alphabets, words, morphisms, and the combinatorics of substitution fixed points.

Letters are stored as dense indices into an ordered alphabet of string tokens,
so both digit alphabets ({0,1,2}) and letter alphabets ({a,b,c}) work.  A
morphism maps each letter of its domain to a word over its codomain; an
endomorphism whose images keep growing under iteration generates one-sided
fixed points sigma^inf(a) for every letter a with sigma(a) starting in a.

Everything here is immutable after construction and safe to share between
threads; all operations are pure.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import DomainError, PrimitivityError


@dataclass(frozen=True)
class Alphabet:
    """Ordered collection of distinct non-whitespace tokens."""

    symbols: tuple[str, ...]
    _lookup: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise DomainError("alphabet must be nonempty")
        for tok in symbols:
            if not tok or any(c.isspace() for c in tok):
                raise DomainError(f"bad alphabet token {tok!r}")
        if len(set(symbols)) != len(symbols):
            raise DomainError("alphabet tokens must be distinct")
        object.__setattr__(self, "_lookup", {t: i for i, t in enumerate(symbols)})

    def __len__(self) -> int:
        return len(self.symbols)

    def index(self, token: str) -> int:
        try:
            return self._lookup[token]
        except KeyError:
            raise DomainError(f"letter {token!r} not in alphabet") from None

    def token(self, index: int) -> str:
        return self.symbols[index]

    def word(self, letters) -> "Word":
        """Build a word from a token string (one letter per character) or iterable of tokens."""
        toks = tuple(letters)
        return Word(self, tuple(self.index(t) for t in toks))


@dataclass(frozen=True)
class Word:
    """Finite sequence of letter indices over a fixed alphabet."""

    alphabet: Alphabet
    letters: tuple[int, ...]

    def __post_init__(self):
        d = len(self.alphabet)
        for x in self.letters:
            if not 0 <= x < d:
                raise DomainError(f"letter index {x} out of range for alphabet of size {d}")

    def __len__(self) -> int:
        return len(self.letters)

    def __iter__(self):
        return iter(self.letters)

    def __getitem__(self, i):
        if isinstance(i, slice):
            return Word(self.alphabet, self.letters[i])
        return self.letters[i]

    def __add__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise DomainError("cannot concatenate words over different alphabets")
        return Word(self.alphabet, self.letters + other.letters)

    def tokens(self) -> tuple[str, ...]:
        return tuple(self.alphabet.token(x) for x in self.letters)

    def text(self) -> str:
        toks = self.tokens()
        sep = "" if all(len(t) == 1 for t in toks) else " "
        return sep.join(toks)

    def __repr__(self):
        return f"Word({self.text()!r})"


@dataclass(frozen=True)
class SubstitutionProfile:
    """Derived facts about a morphism (lengths, properness, growth, coding)."""

    max_len: int
    min_len: int
    constant_length: int | None
    left_proper: bool
    right_proper: bool
    growing: frozenset[int]
    is_coding: bool

    @property
    def is_proper(self) -> bool:
        return self.left_proper or self.right_proper


@dataclass(frozen=True)
class SeedPair:
    """Admissible fixed-point seed: right letter a, optionally a left letter b.

    One-sided seeds describe sigma^inf(a); two-sided seeds describe the
    bi-infinite fixed point around b.a.  All analyses work on the right ray.
    """

    right: int
    left: int | None = None

    @property
    def two_sided(self) -> bool:
        return self.left is not None

    def describe(self, alphabet: Alphabet) -> str:
        if self.two_sided:
            return f"{alphabet.token(self.left)}.{alphabet.token(self.right)}"
        return alphabet.token(self.right)


@dataclass(frozen=True)
class Morphism:
    """Map from a domain alphabet into words over a codomain alphabet.

    Erasing images (empty words) are representable only with
    ``allow_erasing=True`` and are rejected by every analysis in this package.
    """

    domain: Alphabet
    codomain: Alphabet
    images: tuple[tuple[int, ...], ...]
    allow_erasing: bool = False

    def __post_init__(self):
        if len(self.images) != len(self.domain):
            raise DomainError("need exactly one image per domain letter")
        d = len(self.codomain)
        for a, img in enumerate(self.images):
            if not img and not self.allow_erasing:
                raise DomainError(
                    f"erasing image for letter {self.domain.token(a)!r} (pass allow_erasing=True)"
                )
            for x in img:
                if not 0 <= x < d:
                    raise DomainError(f"image letter index {x} out of range")

    @classmethod
    def from_rules(cls, rules, domain=None, codomain=None, allow_erasing=False) -> "Morphism":
        """Build from {token: image} where an image is a token string or iterable of tokens."""
        if domain is None:
            domain = Alphabet(tuple(rules))
        if codomain is None:
            codomain = domain
        images = []
        for a in domain.symbols:
            if a not in rules:
                raise DomainError(f"no rule for letter {a!r}")
            images.append(tuple(codomain.index(t) for t in rules[a]))
        if len(rules) != len(domain):
            extra = set(rules) - set(domain.symbols)
            raise DomainError(f"rules for undeclared letters: {sorted(extra)}")
        return cls(domain, codomain, tuple(images), allow_erasing)

    @property
    def is_endomorphism(self) -> bool:
        return self.domain == self.codomain

    @property
    def is_erasing(self) -> bool:
        return any(not img for img in self.images)

    @property
    def is_coding(self) -> bool:
        return all(len(img) == 1 for img in self.images)

    def image_of(self, letter: int) -> Word:
        return Word(self.codomain, self.images[letter])

    def apply(self, w: Word) -> Word:
        """Concatenation of the letter images, in order."""
        if w.alphabet != self.domain:
            raise DomainError("word is not over the domain alphabet")
        out = []
        for x in w.letters:
            out.extend(self.images[x])
        return Word(self.codomain, tuple(out))

    __call__ = apply

    def iterate(self, letter, k: int) -> Word:
        """k-fold image sigma^k(a) of a single letter (k >= 0)."""
        if not self.is_endomorphism:
            raise DomainError("iteration needs an endomorphism")
        if k < 0:
            raise DomainError("iteration count must be >= 0")
        if isinstance(letter, str):
            letter = self.domain.index(letter)
        w = Word(self.domain, (letter,))
        for _ in range(k):
            w = self.apply(w)
        return w

    def profile(self) -> SubstitutionProfile:
        lens = [len(img) for img in self.images]
        max_len, min_len = max(lens), min(lens)
        constant = max_len if (max_len == min_len and not self.is_erasing) else None
        left = right = False
        if not self.is_erasing:
            left = len({img[0] for img in self.images}) == 1
            right = len({img[-1] for img in self.images}) == 1
        return SubstitutionProfile(
            max_len=max_len,
            min_len=min_len,
            constant_length=constant,
            left_proper=left,
            right_proper=right,
            growing=_growing_letters(self),
            is_coding=self.is_coding,
        )


def identity_coding(alphabet: Alphabet) -> Morphism:
    return Morphism(alphabet, alphabet, tuple((i,) for i in range(len(alphabet))))


def substitution(rules, domain=None) -> Morphism:
    """Endomorphism from {token: image} rules (shorthand used everywhere in tests)."""
    return Morphism.from_rules(rules, domain=domain)


def coding_from_rules(rules, domain=None) -> Morphism:
    """Letter-to-letter morphism; the codomain lists targets in order of first use."""
    if domain is None:
        domain = Alphabet(tuple(rules))
    seen = []
    for a in domain.symbols:
        if a not in rules:
            raise DomainError(f"no coding rule for letter {a!r}")
        target = rules[a]
        if not isinstance(target, str):
            (target,) = tuple(target)
        if target not in seen:
            seen.append(target)
    codomain = Alphabet(tuple(seen))
    images = tuple((codomain.index(rules[a] if isinstance(rules[a], str) else tuple(rules[a])[0]),)
                   for a in domain.symbols)
    return Morphism(domain, codomain, images)


def _dependency_edges(m: Morphism) -> list[set[int]]:
    # letter -> set of letters occurring in its image
    return [set(img) for img in m.images]


def _reachable(edges, start: int) -> set[int]:
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in edges[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


def _growing_letters(m: Morphism) -> frozenset[int]:
    """Letters c with |sigma^n(c)| -> infinity.

    A letter grows exactly when it reaches, in the letter-dependency graph, a
    letter w that lies on a cycle and has |sigma(w)| >= 2: going around that
    cycle reproduces w alongside at least one extra letter, so lengths diverge.
    Letters whose images ultimately erase are removed first so the criterion
    also covers erasing morphisms.
    """
    if not m.is_endomorphism:
        return frozenset()
    d = len(m.domain)
    # letters whose iterated image is eventually empty
    dying = set()
    changed = True
    while changed:
        changed = False
        for a in range(d):
            if a not in dying and all(x in dying for x in m.images[a]):
                dying.add(a)
                changed = True
    edges = [set(x for x in img if x not in dying) for img in m.images]
    weight = [len([x for x in img if x not in dying]) for img in m.images]
    expanding = set()
    for w in range(d):
        if w in dying or weight[w] < 2:
            continue
        # on a cycle: w reachable from w in >= 1 step
        from_w = set()
        stack = list(edges[w])
        while stack:
            v = stack.pop()
            if v in from_w:
                continue
            from_w.add(v)
            stack.extend(edges[v])
        if w in from_w:
            expanding.add(w)
    grow = set()
    for c in range(d):
        if c in dying:
            continue
        if _reachable(edges, c) & expanding:
            grow.add(c)
    return frozenset(grow)


def _require_growing_endomorphism(m: Morphism):
    if not m.is_endomorphism:
        raise DomainError("analysis needs an endomorphism")
    if m.is_erasing:
        raise DomainError("analysis rejects erasing morphisms; recode the input first")


def admissible_seeds(m: Morphism) -> tuple[SeedPair, ...]:
    """All one-sided seeds (sigma(a) starts with a, a growing) and all
    two-sided seeds b.a with ba in the language of the endomorphism."""
    if not m.is_endomorphism:
        raise DomainError("seeds only exist for endomorphisms")
    growing = _growing_letters(m)
    right = [a for a in range(len(m.domain))
             if m.images[a] and m.images[a][0] == a and a in growing]
    left = [b for b in range(len(m.domain))
            if m.images[b] and m.images[b][-1] == b and b in growing]
    seeds = [SeedPair(right=a) for a in right]
    if left and right:
        factors = {w.letters for w in language_two_factors(m)}
        for b in left:
            for a in right:
                if (b, a) in factors:
                    seeds.append(SeedPair(right=a, left=b))
    return tuple(seeds)


def _two_windows(word: tuple[int, ...]):
    return {word[i: i + 2] for i in range(len(word) - 1)}


def language_two_factors(m: Morphism) -> frozenset[Word]:
    """Length-2 factors of all iterated images sigma^n(c), c any letter."""
    _require_growing_endomorphism(m)
    current = set()
    for img in m.images:
        current |= _two_windows(img)
    return _close_two_factors(m, current)


def _close_two_factors(m: Morphism, start: set) -> frozenset[Word]:
    current = set(start)
    while True:
        nxt = set(current)
        for pair in current:
            image = m.images[pair[0]] + m.images[pair[1]]
            nxt |= _two_windows(image)
        if nxt == current:
            return frozenset(Word(m.domain, p) for p in current)
        current = nxt


def two_factor_closure(m: Morphism, seeds) -> frozenset[Word]:
    """Length-2 factors of the fixed points named by ``seeds``.

    Closure of the seed 2-factors under taking 2-factors of images; for a
    primitive substitution this is the full set of length-2 factors of the
    language, whatever the seed.
    """
    _require_growing_endomorphism(m)
    growing = _growing_letters(m)
    start = set()
    for seed in seeds:
        if seed.right not in growing:
            raise DomainError("seed letter is not growing")
        start |= _two_windows(m.images[seed.right])
        if seed.two_sided:
            if seed.left not in growing:
                raise DomainError("seed letter is not growing")
            start.add((seed.left, seed.right))
    if not start:
        raise DomainError("no seeds given")
    return _close_two_factors(m, start)


def is_primitive(m: Morphism) -> bool:
    from .intmat import incidence, is_primitive as matrix_primitive

    return m.is_endomorphism and not m.is_erasing and matrix_primitive(incidence(m))


def factors_of_length(m: Morphism, seed: SeedPair, n: int) -> frozenset[Word]:
    """Exactly the length-n factors of the fixed point of a primitive substitution.

    Any window of length n <= min_a |sigma^k(a)| sits inside sigma^k(w) for some
    2-factor w, so taking the minimal such k gives the factor set exactly.
    """
    if n < 1:
        raise DomainError("factor length must be >= 1")
    if not is_primitive(m):
        raise PrimitivityError("factor computation needs a primitive substitution")
    from .intmat import incidence

    matrix = incidence(m)
    lengths = tuple(1 for _ in range(len(m.domain)))
    k = 0
    while min(lengths) < n:
        lengths = tuple(
            sum(lengths[i] * matrix.entries[i][j] for i in range(len(lengths)))
            for j in range(len(lengths))
        )
        k += 1
    pairs = two_factor_closure(m, [seed])
    out = set()
    for w in pairs:
        expanded = w
        for _ in range(k):
            expanded = m.apply(expanded)
        letters = expanded.letters
        for i in range(len(letters) - n + 1):
            out.add(letters[i: i + n])
    return frozenset(Word(m.domain, f) for f in out)


def fixed_point_prefix(m: Morphism, seed: SeedPair, length: int) -> Word:
    """Prefix of the one-sided fixed point sigma^inf(a), a = seed.right."""
    _require_growing_endomorphism(m)
    a = seed.right
    if not (m.images[a] and m.images[a][0] == a):
        raise DomainError("seed letter must be right-prolongable")
    if a not in _growing_letters(m):
        raise DomainError("seed letter is not growing")
    w = (a,)
    while len(w) < length:
        out = []
        for x in w:
            out.extend(m.images[x])
            if len(out) >= length:
                break
        w = tuple(out)
    return Word(m.domain, w[:length])
