import re
from pathlib import Path

import pytest
from hypothesis import given, strategies as st

from artifact.clrep import (
    AParameter, Character, ClDatum, ClValidationError, MalformedParameter, PiParseError,
    TemperedParam, cl, moeglin_split, parse_pi_notation, render_pi, tempered, validate_character,
)
from artifact.core import DEFAULT_RHO as R, SO_ODD, SP, CuspidalLabel, GroupType, seg

CORPUS = Path(__file__).parent.parent / "src" / "artifact" / "corpus"


def _character(*items):
    phi, eps = tempered(*items)
    return TemperedParam(phi), Character(eps)


def test_character_examples():
    assert validate_character(*_character((0, 1), (0, 1), (0, 1)))
    assert validate_character(*_character((0, -1), (0, -1), (1, 1)))
    assert not validate_character(*_character((0, -1)))
    phi, _ = _character((0, 1), (1, 1))
    assert not validate_character(phi, Character({(R, 1): 1}))
    with pytest.raises(ClValidationError):
        tempered((0, 1), (0, -1))


def test_every_tempered_part_in_the_corpora_is_valid():
    seen = set()
    for path in CORPUS.glob("*/*.expected"):
        for text in re.findall(r"(?:L\([^;]*; )?pi\([^)]*\)\)?", path.read_text()):
            datum = parse_pi_notation(text)
            seen.add((datum.phi, datum.eps))
            assert validate_character(datum.phi, datum.eps)
    assert len(seen) >= 13


def test_langlands_datum_rejects_bad_segments():
    with pytest.raises(ClValidationError):
        cl([(1, 0)], [])
    with pytest.raises(ClValidationError):
        cl([(1, -1)], [])
    with pytest.raises(ClValidationError):
        cl([], [(0, -1)])
    with pytest.raises(ValueError):
        TemperedParam([(R, 2)])
    # a zero-sum segment on the bad line stands for a bad tempered piece
    datum = ClDatum([seg("1/2", "-1/2")])
    assert datum.is_tempered()


def test_group_and_dimension():
    d = cl([(0, -1)], [(0, -1), (1, -1), (2, 1)])
    assert d.dual_dimension() == 13
    assert d.group() == GroupType(SP, 6)
    assert d.mult(R, 3) == 1 and d.sign(R, 5) == 1


@pytest.mark.parametrize("text", [
    "L(D[0,-1]; pi(0^-,1^-,2^+))",
    "pi(0^+)",
    "L(D[-1,-3],D[0,-2],D[2,-3]; pi(1^-,1^-,2^+))",
    "L(D[0,-1]^2; pi(0^+))",
    "pi()",
])
def test_pi_notation_examples(text):
    assert render_pi(parse_pi_notation(text)) == text


def test_pi_notation_builders_agree():
    assert parse_pi_notation("L(D[0,-1]; pi(0^-,1^-,2^+))") == cl([(0, -1)], [(0, -1), (1, -1), (2, 1)])
    assert parse_pi_notation("pi(0^+)") == cl([], [(0, 1)])


def test_pi_notation_labels():
    sigma = CuspidalLabel("sigma", 2, 1)
    d = parse_pi_notation("L(D_sigma[1/2,-3/2]; pi(sigma:1/2^+,sigma:1/2^+))", {"sigma": sigma})
    assert render_pi(d) == "L(D_sigma[1/2,-3/2]; pi(sigma:1/2^+,sigma:1/2^+))"
    assert d.dual_dimension() == 2 * 2 * 3 + 2 * 2 * 2


@pytest.mark.parametrize("text,pos", [
    ("L(D[0,-1] pi(0^+))", 17),
    ("L(D[0,-1]; pi(0^*))", 14),
    ("Q(0^+)", 0),
    ("L(D[0,-1]; pi(0^+,0^-))", 18),
])
def test_parse_errors_carry_positions(text, pos):
    with pytest.raises(PiParseError) as err:
        parse_pi_notation(text)
    assert err.value.pos == pos


@st.composite
def cl_data(draw):
    counts = {x: draw(st.integers(0, 2)) for x in range(4)}
    signs = {x: draw(st.sampled_from([1, -1])) for x in range(4)}
    prod = 1
    for x in range(4):
        prod *= signs[x] ** counts[x]
    if prod == -1:
        odd = [x for x in range(4) if counts[x] % 2]
        signs[odd[0]] *= -1
    temp = [(x, signs[x]) for x in range(4) for _ in range(counts[x])]
    pairs = []
    for _ in range(draw(st.integers(0, 3))):
        x = draw(st.integers(-3, 3))
        y = draw(st.integers(-5, x + 1))
        if x + y < 0 and x - y >= 0:
            pairs.append((x, y))
    return cl(pairs, temp)


@given(cl_data())
def test_text_and_json_round_trips(datum):
    assert parse_pi_notation(render_pi(datum)) == datum
    assert ClDatum.from_json(datum.to_json()) == datum


def test_moeglin_split():
    psi = AParameter([(R, 2, 2), (R, 5, 3)])
    assert psi.group == GroupType(SP, 9)
    assert psi.good_parity
    assert moeglin_split(psi) == ([], psi)
    bad = AParameter([(R, 2, 2), (R, 1, 2), (R, 1, 2)], kind=SO_ODD)
    psi1, psi0 = moeglin_split(bad)
    assert psi1 == [(R, 1, 2)]
    assert psi0 == AParameter([(R, 2, 2)], kind=SO_ODD)
    with pytest.raises(MalformedParameter):
        moeglin_split(AParameter([(R, 1, 2), (R, 1, 1)], kind=SP))


@given(st.lists(st.tuples(st.integers(1, 4), st.integers(1, 4)), min_size=1, max_size=4))
def test_moeglin_split_reconstructs(pairs):
    summands = [(R, a, b) for a, b in pairs]
    bad = [(R, a, b) for a, b in pairs if (a + b) % 2]
    psi = AParameter(summands + bad)
    psi1, psi0 = moeglin_split(psi)
    assert psi0.good_parity
    assert all((a + b) % 2 for _, a, b in psi1)
    assert sorted(psi0.summands + tuple(psi1) * 2, key=lambda t: (t[1], t[2])) == sorted(psi.summands, key=lambda t: (t[1], t[2]))
