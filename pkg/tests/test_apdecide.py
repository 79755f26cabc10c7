import pytest

import arithsub as ar
from corpus import (
    FIBONACCI,
    LOPSIDED,
    PERIOD_DOUBLING,
    PERIODIC_PAIR,
    PROPER_MIX,
    THREE_LETTER_OPEN,
    coding,
    first_seed,
    six_letter_trivial,
    sub,
)


def test_ap_exponent_examples():
    desc = ar.periodic_spectrum(sub(PROPER_MIX))
    assert ar.ap_exponent(6, desc, 2) == 2
    assert ar.ap_exponent(1, desc, 2) == 0
    assert ar.ap_exponent(9, desc, 2) == 4
    with pytest.raises(ar.DomainError):
        ar.ap_exponent(4, desc, 2)  # 4 is not admissible here


def test_witnesses_mix_difference_six():
    mix = sub(PROPER_MIX)
    witnesses = ar.constant_ap_witnesses(mix, 6)
    assert [(w.residue, mix.domain.token(w.letter)) for w in witnesses] == [
        (0, "0"),
        (1, "1"),
    ]
    assert all(w.reduced_difference == 6 and w.exponent == 2 for w in witnesses)


def test_witnesses_mix_rejections():
    mix = sub(PROPER_MIX)
    assert ar.constant_ap_witnesses(mix, 2) == ()
    assert ar.constant_ap_witnesses(mix, 3) == ()


def test_witnesses_mix_reduction():
    mix = sub(PROPER_MIX)
    witnesses = ar.constant_ap_witnesses(mix, 12)
    assert [(w.reduced_difference, w.residue) for w in witnesses] == [(6, 0), (6, 1)]
    assert all(w.requested_difference == 12 for w in witnesses)


def test_reduction_equivalence():
    mix = sub(PROPER_MIX)
    desc = ar.periodic_spectrum(mix)
    for p in range(1, 40):
        direct = ar.constant_ap_witnesses(mix, p)
        reduced = ar.constant_ap_witnesses(mix, desc.reduce(p))
        assert bool(direct) == bool(reduced)
        assert [(w.residue, w.letter) for w in direct] == [
            (w.residue, w.letter) for w in reduced
        ]


def test_trivial_spectrum_has_no_witnesses():
    assert ar.constant_ap_witnesses(six_letter_trivial(), 6) == ()
    assert ar.constant_ap_witnesses(sub(FIBONACCI), 5) == ()
    assert ar.constant_ap_witnesses(sub(LOPSIDED), 3) == ()


def test_period_doubling_witnesses():
    pd = sub(PERIOD_DOUBLING)
    # fixed point 0100 0101 0100 0100 ...: letter 0 sits on the even positions
    witnesses = ar.constant_ap_witnesses(pd, 2)
    assert [(w.residue, pd.domain.token(w.letter)) for w in witnesses] == [(0, "0")]
    assert ar.constant_ap_witnesses(pd, 3) == ()


def test_witness_soundness_against_prefix():
    for rules, ps in ((PROPER_MIX, (2, 3, 6, 12, 18)), (PERIOD_DOUBLING, (2, 4, 3, 8))):
        m = sub(rules)
        seed = first_seed(m)
        for p in ps:
            witnesses = ar.constant_ap_witnesses(m, p, seed=seed)
            if not witnesses:
                continue
            reduced = witnesses[0].reduced_difference
            window = max(10**4, 30 * reduced)
            prefix = ar.fixed_point_prefix(m, seed, window)
            statuses = ar.prefix_ap_scan(prefix, reduced)
            constant = {s.residue: s.letter for s in statuses if s.is_constant}
            for w in witnesses:
                assert constant.get(w.residue) == w.letter, (rules, p, w)


def test_empty_answer_is_refuted_by_prefix():
    for rules, ps in ((PROPER_MIX, (2, 3)), (LOPSIDED, (2, 3, 5))):
        m = sub(rules)
        seed = first_seed(m)
        desc = ar.periodic_spectrum(m, seed)
        for p in ps:
            if ar.constant_ap_witnesses(m, p, seed=seed):
                continue
            reduced = max(desc.reduce(p), 1)
            for q in {p, reduced}:
                prefix = ar.fixed_point_prefix(m, seed, max(10**4, 30 * q))
                statuses = ar.prefix_ap_scan(prefix, q)
                assert all(not s.is_constant for s in statuses), (rules, p, q)


def test_coded_witnesses():
    # merge the two letters of the mix example: everything becomes one letter,
    # so every admissible difference now has a full witness set
    mix = sub(PROPER_MIX)
    collapse = coding({"0": "x", "1": "x"})
    witnesses = ar.constant_ap_witnesses(mix, 6, collapse)
    assert len(witnesses) == 6
    assert {collapse.codomain.token(w.letter) for w in witnesses} == {"x"}
    # a genuinely non-periodic coded image keeps the uncoded answers here
    same = ar.constant_ap_witnesses(mix, 6, ar.identity_coding(mix.domain))
    assert [(w.residue, w.letter) for w in same] == [(0, 0), (1, 1)]


def test_error_surface():
    with pytest.raises(ar.ProperRequiredError):
        ar.constant_ap_witnesses(sub(THREE_LETTER_OPEN), 2)
    with pytest.raises(ar.PeriodicInputError):
        ar.constant_ap_witnesses(sub(PERIODIC_PAIR), 2)
    with pytest.raises(ar.DomainError):
        ar.constant_ap_witnesses(sub(PROPER_MIX), 0)
    not_coding = ar.substitution({"0": "01", "1": "0"})
    with pytest.raises(ar.NotCodingError):
        ar.constant_ap_witnesses(sub(PROPER_MIX), 6, not_coding)
    wrong_domain = coding({"a": "x", "b": "y"})
    with pytest.raises(ar.NotCodingError):
        ar.constant_ap_witnesses(sub(PROPER_MIX), 6, wrong_domain)
