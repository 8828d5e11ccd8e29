"""Acceptance criteria 1-8, all at exact equality of canonical forms.

Each test records its verdict; the terminal summary prints one PASS/FAIL
line per criterion.  Run alone with `pytest tests/test_acceptance.py -v`.
"""

import itertools
import json
import random
from collections import Counter
from pathlib import Path

import pytest

import gl_oracle as oracle
from conftest import ACCEPTANCE
from artifact.arthur import (
    ExtendedMultiSegment, build_pi, decompose_unitary, insert_pair, packet_of, pair_choices, parse_extended,
    psi_of, validate,
)
from artifact.clrep import AParameter, cl, parse_pi_notation as P
from artifact.core import DEFAULT_RHO as R, HalfInt, Segment, half
from artifact.derivatives import (
    ZERO, Cuspidal, DerivativeTrace, apply_fixed, composite_socle, d_max_cuspidal, d_max_delta01,
    d_max_z01_general, d_max_z01_special, soc_cuspidal, soc_delta01, soc_z01_power, special_datum,
    special_shape, z01_inverse, z01_inverse_case, z01_special_case,
)
from artifact.engine import InductionProblem, first_reducible_point, is_irreducible, socle
from artifact.glrep import (
    GLDatum, NotReduced, SpehShape, gl_left_Delta01_derivative_max, gl_left_derivative_max,
    gl_left_Z01_derivative_max, gl_right_derivative_max, gl_socle_cuspidal_left, gl_socle_Delta01_power,
    gl_socle_Z01_power,
)

HALF = HalfInt.from_twice(1)
ONE = parse_extended("{([0,0];0,+1)}")
E57 = parse_extended("{([3,-1];2,-1),([3,1];0,-1),([2,2];0,-1)}")
E58 = [parse_extended(t) for t in (
    "{([1,0];1,+1),([3,1];1,+1)}",
    "{([1,0];0,-1),([3,1];0,+1)}",
    "{([1,0];1,+1),([3,1];0,-1)}",
    "{([1,0];0,+1),([3,1];1,-1)}",
    "{([1,0];0,-1),([3,1];1,-1)}",
)]
COMPUTED_SOCLES = []


def record(number, title):
    def wrap(fn):
        def test():
            ACCEPTANCE[number] = (False, title)
            fn()
            ACCEPTANCE[number] = (True, title)
        test.__name__ = fn.__name__
        test.__doc__ = title
        return test
    return wrap


def socle_at(u, pi):
    result = socle(InductionProblem(u, pi))
    COMPUTED_SOCLES.append(result.summands)
    return {str(p) for p in result.summands}


def as_pairs(pieces):
    return {(E, str(pi)) for E, pi in pieces}


def extended_set(*texts):
    return {parse_extended(t) for t in texts}


@record(1, "small example: socles at s = +-1/2 and both s = 0 decompositions")
def test_criterion_1_small_example():
    assert socle_at(SpehShape(R, 2, 3, HALF), ONE) == {
        "L(D[-1,-1],D[0,-2]; pi(0^+,0^+,1^+))", "L(D[0,-1]; pi(0^-,1^-,2^+))"}
    assert socle_at(SpehShape(R, 2, 3, -HALF), ONE) == {
        "L(D[-1,-2],D[0,-1]^2; pi(0^+))", "L(D[-1,-2],D[0,-1]; pi(0^+,0^+,1^+))"}

    z = decompose_unitary(SpehShape(R, 1, 3), ONE)
    assert {E for E, _ in z} == extended_set(
        "{([1,-1];1,+1),([1,-1];1,+1),([0,0];0,+1)}", "{([1,-1];1,-1),([1,-1];1,-1),([0,0];0,+1)}")
    assert {str(pi) for _, pi in z} == {"L(D[-1,-1]^2; pi(0^+,0^+,0^+))", "L(D[-1,-1]; pi(0^-,0^-,1^+))"}
    u22 = decompose_unitary(SpehShape(R, 2, 2), ONE)
    assert {E for E, _ in u22} == extended_set(
        "{([0,0];0,+1),([1,0];1,+1),([1,0];1,-1)}", "{([0,0];0,+1),([1,0];0,+1),([1,0];0,-1)}")
    assert {str(pi) for _, pi in u22} == {"L(D[0,-1]^2; pi(0^+))", "L(D[0,-1]; pi(0^+,0^+,1^+))"}

    # the outer large-s steps
    z02 = SpehShape(R, 1, 3, 1)
    assert str(composite_socle(P("L(D[-1,-1]^2; pi(0^+,0^+,0^+))"), z02)) == "L(D[-1,-1],D[0,-2]; pi(0^+,0^+,1^+))"
    assert str(composite_socle(P("L(D[-1,-1]; pi(0^-,0^-,1^+))"), z02)) == "L(D[0,-1]; pi(0^-,1^-,2^+))"
    d12 = SpehShape(R, 2, 1, HalfInt.from_twice(-3))
    assert str(composite_socle(P("L(D[0,-1]^2; pi(0^+))"), d12)) == "L(D[-1,-2],D[0,-1]^2; pi(0^+))"
    assert str(composite_socle(P("L(D[0,-1]; pi(0^+,0^+,1^+))"), d12)) == "L(D[-1,-2],D[0,-1]; pi(0^+,0^+,1^+))"


def fixed(*steps):
    return DerivativeTrace((Cuspidal(R, half(x)), k) for x, k in steps)


@record(2, "large example: pi(E), the s = 0 survivor, the s = 1 vanishing pair, s0 = 1")
def test_criterion_2_large_example():
    assert build_pi(E57) == P("L(D[-1,-3],D[0,-2],D[2,-3]; pi(1^-,1^-,2^+))")

    candidates = {(l, eta): build_pi(insert_pair(E57, R, 3, 0, l, eta)) for l, eta in pair_choices(4)}
    assert len(candidates) == 5
    assert [key for key, pi in candidates.items() if pi is not ZERO] == [(1, -1)]
    assert socle_at(SpehShape(R, 4, 4), E57) == {str(candidates[(1, -1)])}

    companion = {(l, eta): build_pi(insert_pair(E57, R, 2, -1, l, eta)) for l, eta in pair_choices(4)}
    assert {key for key, pi in companion.items() if pi is not ZERO} == {(2, 1), (1, -1)}
    chain = fixed((1, 1), (2, 2), (3, 1))
    assert apply_fixed(build_pi(E57), chain) is not ZERO
    assert apply_fixed(companion[(2, 1)], chain) is ZERO

    plus = socle(InductionProblem(SpehShape(R, 4, 4, 1), E57)).summands
    minus = socle(InductionProblem(SpehShape(R, 4, 4, -1), E57)).summands
    COMPUTED_SOCLES.extend([plus, minus])
    assert len(plus) == len(minus) == 1
    longer = fixed((1, 2), (2, 3), (3, 2))
    assert apply_fixed(plus[0], longer) is not ZERO
    assert apply_fixed(minus[0], longer) is ZERO
    assert plus[0] != minus[0]

    assert first_reducible_point(SpehShape(R, 4, 4), E57) == 1


@record(3, "packet example: members, s = 0 decompositions, s = +-1, +-2 socles, first reducible points")
def test_criterion_3_packet_example():
    psi = AParameter([(R, 2, 2), (R, 5, 3)])
    assert {E for E, _ in packet_of(psi)} == set(E58)
    assert all(psi_of(E) == psi for E in E58)

    expected = [
        [("{([2,1];0,+1),([2,1];0,-1)}"), ("{([2,1];1,+1),([2,1];1,-1)}")],
        [("{([2,1];0,+1),([2,1];0,-1)}")],
        [("{([2,1];0,-1),([2,1];0,+1)}")],
        [("{([2,1];1,+1),([2,1];1,-1)}"), ("{([2,1];0,-1),([2,1];0,+1)}")],
        [("{([2,1];1,+1),([2,1];1,-1)}")],
    ]
    total = 0
    u = SpehShape(R, 4, 2)
    for E, pairs in zip(E58, expected):
        got = decompose_unitary(u, E)
        want = set()
        for text in pairs:
            extra = parse_extended(text).segments
            want.add(ExtendedMultiSegment(E.segments + extra))
        assert {E2 for E2, _ in got} == want
        total += len(got)
        assert is_irreducible(InductionProblem(u, E)) == (len(got) == 1)
    assert total == 7
    assert [not is_irreducible(InductionProblem(u, E)) for E in E58] == [True, False, False, True, False]

    socles = {
        (2, 1): "L(D[1,-3],D[0,-1]; pi(0^-,1^-,2^-,2^-,3^+))",
        (2, -1): "L(D[0,-3],D[1,-2]; pi(0^-,1^+,1^+,2^-,3^+))",
        (3, 1): "L(D[0,-3],D[0,-1],D[1,-2]; pi(1^-,2^+,3^-))",
        (3, -1): "L(D[0,-3],D[0,-1],D[1,-2]; pi(1^-,2^+,3^-))",
        (5, 1): "L(D[0,-3],D[2,-3]; pi(0^-,1^+,1^+,1^+,2^-))",
        (5, -1): "L(D[0,-3],D[1,-3],D[1,-2]; pi(0^-,1^+,2^-))",
        (3, 2): "L(D[0,-3],D[1,-2]; pi(1^-,3^+,4^-))",
        (3, -2): "L(D[-1,-4],D[0,-3],D[0,-1]; pi(1^-,2^+,3^-))",
    }
    for (i, s), text in socles.items():
        assert socle_at(u.twisted(s), E58[i - 1]) == {str(P(text))}, (i, s)

    assert [first_reducible_point(u, E) for E in E58] == [0, 1, 2, 0, 1]


def random_E(rng):
    while True:
        segs = []
        for _ in range(rng.randint(1, 3)):
            B = rng.randint(-1, 2)
            A = B + rng.randint(0, 3)
            if A + B >= 0:
                segs.append(parse_extended(f"{{([{A},{B}];{rng.randint(0, (A - B + 1) // 2)},{rng.choice(['+1', '-1'])})}}").segments[0])
        if not segs:
            continue
        rng.shuffle(segs)
        segs.sort(key=lambda e: e.B.twice)
        E = ExtendedMultiSegment(segs)
        if validate(E)[0] and build_pi(E) is not ZERO:
            return E


@record(4, "length bound for unitary induction and the doubled-parameter packet size")
def test_criterion_4_length_bound():
    rng = random.Random(2024)
    cases = 0
    while cases < 220:
        E = random_E(rng)
        a, b = rng.randint(1, 4), rng.randint(1, 4)
        if (a + b) % 2:
            continue
        assert len(decompose_unitary(SpehShape(R, a, b), E)) <= min(a, b) + 1
        cases += 1
    for a, b in itertools.product(range(1, 5), repeat=2):
        if (a + b) % 2 == 0:
            assert len(packet_of(AParameter([(R, a, b)] * 2))) == min(a, b) + 1


def random_pi(rng):
    while True:
        temp = []
        for x in range(3):
            sign = rng.choice([1, -1])
            temp += [(x, sign)] * rng.choice([0, 0, 1, 1, 2])
        prod = 1
        for _, sign in temp:
            prod *= sign
        if prod == -1:
            continue
        pairs = []
        for _ in range(rng.choice([0, 1, 1, 2, 2, 3])):
            x = rng.randint(-3, 2)
            y = rng.randint(-4, x)
            if x + y < 0:
                pairs.append((x, y))
        return cl(pairs, temp)


@record(5, "derive-then-socle and socle-then-derive identities, commutation of far-apart derivatives")
def test_criterion_5_round_trips():
    rng = random.Random(5)
    counts = Counter()
    while min(counts["cuspidal"], counts["delta01"], counts["z01"]) < 500:
        pi = random_pi(rng)
        x = half(rng.choice([-3, -2, -1, 1, 2, 3]))
        r = rng.randint(1, 2)
        base, k = d_max_cuspidal(pi, R, x)
        assert soc_cuspidal(base, R, x, k) == pi
        assert d_max_cuspidal(soc_cuspidal(pi, R, x, r), R, x) == (base, k + r)
        counts["cuspidal"] += 1
        try:
            base, k = d_max_delta01(pi, R)
            assert soc_delta01(base, R, k) == pi
            assert d_max_delta01(soc_delta01(pi, R, r), R) == (base, k + r)
            counts["delta01"] += 1
        except NotReduced:
            pass
        try:
            base, k = d_max_z01_general(pi, R)
            assert soc_z01_power(base, R, k) == pi
            assert d_max_z01_general(soc_z01_power(pi, R, r), R) == (base, k + r)
            counts["z01"] += 1
        except NotReduced:
            pass
    while counts["commute"] < 200:
        pi = random_pi(rng)
        x, y = (half(v) for v in rng.sample([-3, -2, -1, 1, 2, 3], 2))
        if abs(x - y) == 1:
            continue
        one = d_max_cuspidal(d_max_cuspidal(pi, R, x)[0], R, y)[0]
        two = d_max_cuspidal(d_max_cuspidal(pi, R, y)[0], R, x)[0]
        assert one == two
        counts["commute"] += 1


def special_instances():
    for s, t, m, m3, m5 in itertools.product(range(4), range(4), range(5), range(3), range(2)):
        for e1, e3 in itertools.product((1, -1), repeat=2):
            if (e1 == -1 and not m) or (e3 == -1 and not m3):
                continue
            counts = +Counter({(R, 1): m, (R, 3): m3, (R, 5): m5})
            signs = {}
            if m:
                signs[(R, 1)] = e1
            if m3:
                signs[(R, 3)] = e3
            prod = e1 ** m * e3 ** m3
            if m5:
                signs[(R, 5)] = prod
            elif prod != 1:
                continue
            yield s, t, counts, signs


@record(6, "special Z[0,1] formula: all 4 forward and 12 inverse cases hit, inverse undoes forward")
def test_criterion_6_table_coverage():
    forward, inverse = set(), set()
    for s, t, counts, signs in special_instances():
        try:
            res, k = d_max_z01_special(R, s, t, counts, signs)
        except NotReduced:
            continue
        forward.add(z01_special_case(R, s, t, counts, signs))
        if k > 0:
            s1, t1, c1, g1 = special_shape(res, R)
            inverse.add(z01_inverse_case(R, s1, t1, c1, k))
            assert z01_inverse(R, s1, t1, c1, g1, k) == special_datum(R, s, t, counts, signs)
    assert forward == {1, 2, 3, 4}
    assert inverse == set(range(1, 13))


@record(7, "multiplicity one in every computed socle and the +-s symmetry of irreducibility")
def test_criterion_7_multiplicity_free():
    if not COMPUTED_SOCLES:
        test_criterion_1_small_example()
        test_criterion_2_large_example()
        test_criterion_3_packet_example()
    assert len(COMPUTED_SOCLES) >= 13
    for summands in COMPUTED_SOCLES:
        assert len(set(summands)) == len(summands)
    problems = [(SpehShape(R, 2, 3), ONE, [HALF]), (SpehShape(R, 4, 4), E57, [1, 2])]
    problems += [(SpehShape(R, 4, 2), E, [1, 2]) for E in E58]
    for u, E, points in problems:
        for s in points:
            assert is_irreducible(InductionProblem(u.twisted(s), E)) == is_irreducible(InductionProblem(u.twisted(-s), E))


TABLE = json.loads((Path(__file__).parent / "data" / "gl_oracle_table.json").read_text())


def to_gl(m):
    return GLDatum(Segment(R, HalfInt.from_twice(x), HalfInt.from_twice(y)) for x, y in m)


def to_ms(tau):
    return oracle.canon((s.x.twice, s.y.twice) for s in tau.segs)


def frozen(v):
    return oracle.canon(tuple(s) for s in v)


@record(8, "GL derivatives and socles agree with the brute-force Zelevinsky-ring oracle")
def test_criterion_8_gl_oracle():
    compared = 0
    for row in TABLE["rows"]:
        m = frozen(row["m"])
        tau = to_gl(m)
        for key, want in row["left"].items():
            x = int(key)
            got = gl_left_derivative_max(tau, R, x)
            assert (to_ms(got[0]), got[1]) == (frozen(want[0]), want[1])
            got = gl_right_derivative_max(tau, R, x)
            assert (to_ms(got[0]), got[1]) == (frozen(row["right"][key][0]), row["right"][key][1])
            compared += 2
            if key in row["socle"]:
                assert to_ms(gl_socle_cuspidal_left(tau, R, x)) == frozen(row["socle"][key])
                compared += 1
        for key, fn in (("z01", gl_left_Z01_derivative_max), ("delta01", gl_left_Delta01_derivative_max)):
            if row[key] is not None:
                got = fn(tau, R)
                assert (to_ms(got[0]), got[1]) == (frozen(row[key][0]), row[key][1])
                compared += 1
        for key, fn in (("z01_socle", gl_socle_Z01_power), ("delta01_socle", gl_socle_Delta01_power)):
            if row.get(key) is not None:
                assert to_ms(fn(tau, R, 1)) == frozen(row[key])
                compared += 1
    assert compared > 10000
