"""Command-line front end: line-oriented input files, JSON reports on stdout.

Input grammar (``#`` starts a comment anywhere on a line)::

    alphabet: 0 1
    rule 0 -> 0 1
    rule 1 -> 0 1 1 0
    code 0 -> a          # optional letter-to-letter coding, one line per letter
    seed: 0              # optional; two-sided seeds are written  seed: b.a

Reports are deterministic: keys sorted, collections ordered, and every
integer quantity serialised as a decimal string so arbitrarily large values
survive any JSON consumer.  Exit codes: 0 success, 1 usage error, 2 violated
precondition, 3 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass

from . import heightgraph, oracle, periodicity, spectrum, words
from .apdecide import constant_ap_witnesses
from .errors import (
    ArithsubError,
    DomainError,
    InputSyntaxError,
    ProperRequiredError,
)
from .intmat import incidence
from .words import Alphabet, Morphism, SeedPair

SCHEMA = 1


class _UsageError(Exception):
    pass


@dataclass(frozen=True)
class AnalysisInput:
    substitution: Morphism
    coding: Morphism | None = None
    seed: SeedPair | None = None


def parse_input(text: str) -> AnalysisInput:
    """Parse and validate the line grammar above."""
    alphabet_line = None
    rule_lines: list[tuple[int, str, tuple[str, ...]]] = []
    code_lines: list[tuple[int, str, str]] = []
    seed_line = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if line.startswith("alphabet:"):
            if alphabet_line is not None:
                raise InputSyntaxError("duplicate alphabet line", lineno)
            alphabet_line = (lineno, tuple(line[len("alphabet:"):].split()))
        elif line.startswith("rule "):
            body = line[len("rule "):]
            if "->" not in body:
                raise InputSyntaxError("rule needs '->'", lineno)
            left, right = body.split("->", 1)
            left_tokens = left.split()
            if len(left_tokens) != 1:
                raise InputSyntaxError("rule needs exactly one source letter", lineno)
            image = tuple(right.split())
            if not image:
                raise InputSyntaxError("empty rule image", lineno)
            rule_lines.append((lineno, left_tokens[0], image))
        elif line.startswith("code "):
            body = line[len("code "):]
            if "->" not in body:
                raise InputSyntaxError("code needs '->'", lineno)
            left, right = body.split("->", 1)
            left_tokens, right_tokens = left.split(), right.split()
            if len(left_tokens) != 1 or len(right_tokens) != 1:
                raise InputSyntaxError("code maps one letter to one letter", lineno)
            code_lines.append((lineno, left_tokens[0], right_tokens[0]))
        elif line.startswith("seed:"):
            if seed_line is not None:
                raise InputSyntaxError("duplicate seed line", lineno)
            seed_line = (lineno, line[len("seed:"):].strip())
        else:
            raise InputSyntaxError(f"unrecognized directive {line.split()[0]!r}", lineno)

    if alphabet_line is None:
        raise InputSyntaxError("missing alphabet line")
    lineno, symbols = alphabet_line
    try:
        alphabet = Alphabet(symbols)
    except DomainError as exc:
        raise InputSyntaxError(str(exc), lineno) from None

    rules: dict[str, tuple[str, ...]] = {}
    for lineno, letter, image in rule_lines:
        if letter not in alphabet.symbols:
            raise InputSyntaxError(f"rule for undeclared letter {letter!r}", lineno)
        if letter in rules:
            raise InputSyntaxError(f"duplicate rule for letter {letter!r}", lineno)
        for tok in image:
            if tok not in alphabet.symbols:
                raise InputSyntaxError(f"undeclared letter {tok!r} in image", lineno)
        rules[letter] = image
    missing = [a for a in alphabet.symbols if a not in rules]
    if missing:
        raise InputSyntaxError(f"missing rule for letters: {' '.join(missing)}")
    substitution = Morphism.from_rules(rules, domain=alphabet)

    coding = None
    if code_lines:
        codes: dict[str, str] = {}
        for lineno, letter, target in code_lines:
            if letter not in alphabet.symbols:
                raise InputSyntaxError(f"code for undeclared letter {letter!r}", lineno)
            if letter in codes:
                raise InputSyntaxError(f"duplicate code for letter {letter!r}", lineno)
            codes[letter] = target
        missing = [a for a in alphabet.symbols if a not in codes]
        if missing:
            raise InputSyntaxError(f"coding must cover every letter; missing: {' '.join(missing)}")
        coding = words.coding_from_rules(codes, domain=alphabet)

    seed = None
    if seed_line is not None:
        lineno, body = seed_line
        if not body:
            raise InputSyntaxError("empty seed", lineno)
        parts = body.split(".")
        if len(parts) == 1:
            tokens = [None, parts[0]]
        elif len(parts) == 2:
            tokens = [parts[0], parts[1]]
        else:
            raise InputSyntaxError("seed is one letter or left.right", lineno)
        for tok in tokens:
            if tok is not None and tok not in alphabet.symbols:
                raise InputSyntaxError(f"undeclared seed letter {tok!r}", lineno)
        seed = SeedPair(
            right=alphabet.index(tokens[1]),
            left=alphabet.index(tokens[0]) if tokens[0] is not None else None,
        )
    return AnalysisInput(substitution=substitution, coding=coding, seed=seed)


def format_input(ai: AnalysisInput) -> str:
    """Canonical textual form; parse(format_input(x)) == x."""
    m = ai.substitution
    lines = ["alphabet: " + " ".join(m.domain.symbols)]
    for a, img in enumerate(m.images):
        lines.append(
            f"rule {m.domain.token(a)} -> " + " ".join(m.codomain.token(x) for x in img)
        )
    if ai.coding is not None:
        for a, img in enumerate(ai.coding.images):
            lines.append(
                f"code {m.domain.token(a)} -> {ai.coding.codomain.token(img[0])}"
            )
    if ai.seed is not None:
        lines.append("seed: " + ai.seed.describe(m.domain))
    return "\n".join(lines) + "\n"


def _jint(n: int) -> str:
    return str(int(n))


def _input_echo(ai: AnalysisInput) -> dict:
    m = ai.substitution
    echo = {
        "alphabet": list(m.domain.symbols),
        "rules": [
            [m.domain.token(a), [m.codomain.token(x) for x in img]]
            for a, img in enumerate(m.images)
        ],
        "coding": None,
        "seed": ai.seed.describe(m.domain) if ai.seed else None,
    }
    if ai.coding is not None:
        echo["coding"] = [
            [m.domain.token(a), ai.coding.codomain.token(img[0])]
            for a, img in enumerate(ai.coding.images)
        ]
    return echo


def _profile_echo(m: Morphism) -> dict:
    profile = m.profile()
    return {
        "max_length": _jint(profile.max_len),
        "min_length": _jint(profile.min_len),
        "constant_length": _jint(profile.constant_length) if profile.constant_length else None,
        "left_proper": profile.left_proper,
        "right_proper": profile.right_proper,
        "growing_letters": [m.domain.token(a) for a in sorted(profile.growing)],
        "is_coding": profile.is_coding,
    }


def _verdict_echo(verdict: periodicity.PeriodicityVerdict) -> dict:
    return {
        "kind": verdict.kind.value,
        "minimal_period": _jint(verdict.minimal_period) if verdict.minimal_period else None,
        "residue_periods": [_jint(p) for p in verdict.residue_periods]
        if verdict.residue_periods
        else None,
        "bound": _jint(verdict.bound) if verdict.bound else None,
    }


def _descriptor_echo(desc: spectrum.SpectrumDescriptor, limit: int = 100) -> dict:
    return {
        "infinite_primes": [_jint(p) for p in sorted(desc.infinite)],
        "bounded_primes": [[_jint(q), _jint(cap)] for q, cap in desc.bounded],
        "trivial": desc.trivial,
        "members_upto": {
            "limit": _jint(limit),
            "values": [_jint(v) for v in desc.elements_upto(limit)],
        },
        "note": "1 (trivial) is always a member",
    }


def _resolve_seed(ai: AnalysisInput) -> SeedPair:
    m = ai.substitution
    if ai.seed is not None:
        a = ai.seed.right
        if not (m.images[a] and m.images[a][0] == a):
            raise DomainError(
                f"seed letter {m.domain.token(a)!r} is not right-prolongable"
            )
        return ai.seed
    seeds = words.admissible_seeds(m)
    if not seeds:
        raise DomainError("no admissible fixed point; analyze a power of the substitution")
    return seeds[0]


def _conditional(verdict: periodicity.PeriodicityVerdict) -> dict | None:
    if verdict.kind is periodicity.PeriodicityKind.NONPERIODIC_UP_TO:
        return {"nonperiodic_bound": _jint(verdict.bound)}
    return None


def run_command(ai: AnalysisInput, command: str, options: dict) -> dict:
    """Dispatch one command; returns the full report dictionary."""
    m = ai.substitution
    bound = int(options.get("bound", 64))
    report = {
        "schema": SCHEMA,
        "command": command,
        "options": {k: str(v) for k, v in sorted(options.items()) if v is not None},
        "input": _input_echo(ai),
    }
    diagnostics: dict = {}
    result: dict = {}

    if command == "info":
        result["profile"] = _profile_echo(m)
        result["primitive"] = words.is_primitive(m)
        result["incidence"] = [[_jint(x) for x in row] for row in incidence(m).entries]
        result["seeds"] = [s.describe(m.domain) for s in words.admissible_seeds(m)]

    elif command == "periodic":
        verdict = periodicity.periodicity_test(m, ai.seed, bound)
        result["verdict"] = _verdict_echo(verdict)
        if _conditional(verdict):
            diagnostics["conditional"] = _conditional(verdict)

    elif command == "spectrum":
        seed = _resolve_seed(ai)
        desc = spectrum.periodic_spectrum(m, seed, bound)
        result["spectrum"] = _descriptor_echo(desc, int(options.get("limit", 100)))
        if desc.trivial:
            result["note"] = "no non-trivial rational eigenvalue"
        verdict = periodicity.periodicity_test(m, seed, bound)
        if _conditional(verdict):
            diagnostics["conditional"] = _conditional(verdict)

    elif command == "check":
        p = int(options["difference"])
        seed = _resolve_seed(ai)
        profile = m.profile()
        if profile.constant_length is not None and profile.constant_length >= 2:
            outcome = heightgraph.difference_witnesses(m, p, ai.coding, seed)
            codomain = ai.coding.codomain if ai.coding else m.domain
            result["path"] = "constant-length"
            result["requested_difference"] = _jint(outcome.requested)
            result["reduced_difference"] = _jint(outcome.reduced)
            result["level"] = _jint(outcome.level)
            result["witnesses"] = [
                {"residue": _jint(r), "letter": codomain.token(b)}
                for r, b in outcome.witnesses
            ]
        elif profile.is_proper:
            witnesses = constant_ap_witnesses(m, p, ai.coding, seed, bound)
            codomain = ai.coding.codomain if ai.coding else m.domain
            result["path"] = "proper"
            result["requested_difference"] = _jint(p)
            result["reduced_difference"] = (
                _jint(witnesses[0].reduced_difference) if witnesses else None
            )
            result["exponent"] = _jint(witnesses[0].exponent) if witnesses else None
            result["witnesses"] = [
                {"residue": _jint(w.residue), "letter": codomain.token(w.letter)}
                for w in witnesses
            ]
            verdict = periodicity.periodicity_test(m, seed, bound)
            if _conditional(verdict):
                diagnostics["conditional"] = _conditional(verdict)
        else:
            raise ProperRequiredError(
                "checking a difference needs a constant-length or proper substitution"
            )
        result["note"] = (
            "every start congruent to a witness residue modulo the reduced "
            "difference witnesses the requested difference"
        )

    elif command == "height":
        seed = _resolve_seed(ai)
        hd = heightgraph.height(m, seed)
        result["height"] = _jint(hd.height)
        result["classes"] = [
            [m.domain.token(a) for a in sorted(cls)] for cls in hd.classes
        ]

    elif command == "graph":
        seed = _resolve_seed(ai)
        graph = heightgraph.period_graph(m, heightgraph.height(m, seed))
        codomain = ai.coding.codomain if ai.coding else m.domain
        result["vertices"] = [
            {
                "id": _jint(v),
                "letters": list(graph.vertex_tokens(v)),
                "image": [
                    codomain.token(i)
                    for i in sorted(heightgraph.phi_image(graph, ai.coding, v))
                ],
            }
            for v in range(len(graph.vertices))
        ]
        result["roots"] = [_jint(v) for v in graph.roots]
        result["edges"] = [
            {"from": _jint(v), "digit": _jint(d), "to": _jint(w)}
            for v in range(len(graph.vertices))
            for d, w in enumerate(graph.edges[v])
        ]
        result["branching_number"] = _jint(heightgraph.branching_number(graph))
        dot = heightgraph.graph_to_dot(graph, ai.coding)
        result["dot"] = dot
        path = options.get("dot")
        if path:
            with open(path, "w", encoding="utf-8") as handle:
                handle.write(dot)
            result["dot_written_to"] = str(path)

    elif command == "classify":
        seed = _resolve_seed(ai)
        graph = heightgraph.period_graph(m, heightgraph.height(m, seed))
        outcome = heightgraph.classify(graph, ai.coding)
        result["classification"] = outcome.kind.value
        result["branching_number"] = _jint(heightgraph.branching_number(graph))
        if outcome.witness_vertex is not None:
            result["witness_vertex"] = list(graph.vertex_tokens(outcome.witness_vertex))
        if outcome.cycle is not None:
            result["certificate_cycle"] = [
                list(graph.vertex_tokens(v)) for v in outcome.cycle
            ]
        if outcome.kind is heightgraph.AutoClassification.HAS_CONSTANT_AP:
            reports = heightgraph.level_reports(
                graph, ai.coding, int(options.get("max_level", 6))
            )
            result["level_reports"] = _level_echo(reports, ai, m)

    elif command == "periods":
        seed = _resolve_seed(ai)
        graph = heightgraph.period_graph(m, heightgraph.height(m, seed))
        reports = heightgraph.level_reports(
            graph,
            ai.coding,
            int(options.get("max_level", 6)),
            int(options.get("budget", 10**6)),
        )
        result["level_reports"] = _level_echo(reports, ai, m)
        result["essential_periods"] = sorted(
            {
                _jint(period)
                for rep in reports
                for period, _, _ in rep.new_essential_periods
            },
            key=int,
        )

    elif command == "oracle":
        p = int(options["difference"])
        length = int(options.get("length") or oracle.default_scan_length(p))
        seed = _resolve_seed(ai)
        prefix = words.fixed_point_prefix(m, seed, length)
        if ai.coding is not None:
            prefix = ai.coding.apply(prefix)
        codomain = prefix.alphabet
        statuses = oracle.prefix_ap_scan(prefix, p)
        result["difference"] = _jint(p)
        result["length"] = _jint(length)
        result["statuses"] = [
            {
                "residue": _jint(s.residue),
                "status": "constant" if s.is_constant else "violated",
                "letter": codomain.token(s.letter) if s.is_constant else None,
                "violation": [_jint(x) for x in s.violation] if s.violation else None,
                "positions_scanned": _jint(s.positions_scanned),
            }
            for s in statuses
        ]

    elif command == "intersect":
        other = parse_input(_read_text(options["other"]))
        n = int(options["length"])
        count = oracle.factor_intersection(
            (m, _resolve_seed(ai)),
            (other.substitution, _resolve_seed(other)),
            n,
        )
        result["length"] = _jint(n)
        result["common_factors"] = _jint(count)

    elif command == "complexity":
        seed = _resolve_seed(ai)
        max_n = int(options["max_n"])
        if max_n < 1:
            raise DomainError("--max-n must be >= 1")
        result["values"] = [
            {"n": _jint(n), "factors": _jint(periodicity.complexity(m, seed, n))}
            for n in range(1, max_n + 1)
        ]

    else:
        raise _UsageError(f"unknown command {command!r}")

    report["result"] = result
    report["diagnostics"] = diagnostics
    return report


def _level_echo(reports, ai: AnalysisInput, m: Morphism) -> list[dict]:
    codomain = ai.coding.codomain if ai.coding else m.domain
    return [
        {
            "level": _jint(rep.level),
            "difference": _jint(rep.difference),
            "singletons": _jint(rep.singleton_count),
            "new_essential_periods": [
                {
                    "period": _jint(period),
                    "residue": _jint(residue),
                    "letter": codomain.token(letter),
                }
                for period, residue, letter in rep.new_essential_periods
            ],
        }
        for rep in reports
    ]


def _read_text(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return handle.read()
    except OSError as exc:
        raise InputSyntaxError(f"cannot read {path}: {exc.strerror}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(message)


def _build_parser() -> _Parser:
    parser = _Parser(
        prog="arithsub",
        description="Constant arithmetic subsequences and spectra of substitution fixed points",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text, **flags):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("input", help="path to the substitution description file")
        for flag, spec in flags.items():
            p.add_argument(flag, **spec)
        return p

    add("info", "profile, primitivity, admissible seeds")
    add("periodic", "periodicity verdict", **{"--bound": dict(type=int, default=64)})
    add(
        "spectrum",
        "admissible periods of the subshift",
        **{"--bound": dict(type=int, default=64), "--limit": dict(type=int, default=100)},
    )
    add(
        "check",
        "decide one common difference",
        **{
            "--difference": dict(type=int, required=True),
            "--bound": dict(type=int, default=64),
        },
    )
    add("height", "height and letter classes (constant length)")
    add("graph", "period graph and DOT export", **{"--dot": dict(default=None)})
    add(
        "classify",
        "trichotomy for constant-length inputs",
        **{"--max-level": dict(type=int, default=6, dest="max_level")},
    )
    add(
        "periods",
        "level-by-level essential periods",
        **{
            "--max-level": dict(type=int, default=6, dest="max_level"),
            "--budget": dict(type=int, default=10**6),
        },
    )
    add(
        "oracle",
        "brute-force residue scan on an explicit prefix",
        **{
            "--difference": dict(type=int, required=True),
            "--length": dict(type=int, default=None),
        },
    )
    add(
        "intersect",
        "count shared factors with another fixed point",
        **{
            "--other": dict(required=True),
            "--length": dict(type=int, required=True),
        },
    )
    add("complexity", "factor counts p(n)", **{"--max-n": dict(type=int, required=True, dest="max_n")})
    return parser


def _emit(report: dict) -> None:
    sys.stdout.write(json.dumps(report, sort_keys=True, indent=2) + "\n")


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    options = {
        k: v for k, v in vars(args).items() if k not in {"command", "input"}
    }
    command = args.command
    try:
        ai = parse_input(_read_text(args.input))
        report = run_command(ai, command, options)
    except InputSyntaxError as exc:
        _emit(
            {
                "schema": SCHEMA,
                "command": command,
                "error": {"kind": "InputSyntaxError", "message": str(exc)},
            }
        )
        return 3
    except _UsageError as exc:
        sys.stderr.write(f"usage error: {exc}\n")
        return 1
    except ArithsubError as exc:
        _emit(
            {
                "schema": SCHEMA,
                "command": command,
                "error": {"kind": type(exc).__name__, "message": str(exc)},
            }
        )
        return 2
    _emit(report)
    return 0


if __name__ == "__main__":
    sys.exit(main())
