"""Socles of u_rho(a,b)|.|^s x| pi, irreducibility and the first reducible point."""

from dataclasses import dataclass, field
from fractions import Fraction

from .arthur import (
    IRREDUCIBLE_BAD,
    ExtendedMultiSegment,
    build_pi,
    decompose_unitary,
    psi_of,
)
from .clrep import ClDatum
from .core import HalfInt, Segment, half, is_good_parity
from .derivatives import ZERO, apply_fixed, composite_socle, run_chain, chain_kinds
from .glrep import SpehShape

LARGE_S = "large_s"
MIDDLE_POS = "middle_pos"
MIDDLE_NEG = "middle_neg"
UNITARY = "unitary"
BAD_PARITY = "bad_parity_irreducible"


@dataclass(frozen=True)
class SocleResult:
    summands: tuple
    regime: str
    trace: tuple = field(default=(), compare=False)

    def __post_init__(self):
        if len(set(self.summands)) != len(self.summands):
            raise AssertionError("socle summands must be distinct")


@dataclass(frozen=True)
class InductionProblem:
    u: SpehShape
    pi: object  # ExtendedMultiSegment or ClDatum

    def at(self, s):
        return InductionProblem(self.u.twisted(s), self.pi)


class EngineError(ValueError):
    pass


def _pi_datum(pi):
    if isinstance(pi, ExtendedMultiSegment):
        datum = build_pi(pi)
        if datum is ZERO:
            raise EngineError(f"pi(E) vanishes for E = {pi}")
        return datum
    return pi


def _needs_E(pi):
    if not isinstance(pi, ExtendedMultiSegment):
        raise EngineError("this range of s needs pi given as an extended multi-segment")
    return pi


def _on_bad_line(u):
    """The exponents of u_rho(a,b)|.|^s lie on a bad-parity line."""
    return not is_good_parity(u.rho, u.a + u.s.twice, u.b)


def bad_line_datum(pi, u):
    """u|.|^s x| pi on a bad line is irreducible: add the negative columns of u twice,
    and a zero-sum column as a bad tempered piece."""
    A, B, s = u.A, u.B, u.s
    extra = []
    for j in range(u.b):
        col = Segment(u.rho, B + s + j, -A + s + j)
        total = col.x + col.y
        if total < 0:
            extra.append(col)
        elif total > 0:
            extra.append(col.dual())
        else:
            extra.append(col)
    return ClDatum(list(pi.gl.segs) + extra, pi.phi, pi.eps)


def image_chains(u):
    """Derivative chains of the image test for s in the middle range."""
    A, B, s = u.A, u.B, u.s
    rho = u.rho
    if s > 0:
        return [chain_kinds(rho, B + s - i, A + s - i) for i in range(s.twice)]
    return [chain_kinds(rho, B + s + j, -A + s + j) for j in range(-s.twice)]


def image_test(sigma, problem):
    """Does soc(companion piece) map into u|.|^s x| pi?  Checked by pushing the
    exponent vector of pi through sigma."""
    pi = _pi_datum(problem.pi)
    sigma = _pi_datum(sigma)
    kinds = [k for chain in image_chains(problem.u) for k in chain]
    _, trace = run_chain(pi, kinds)
    return apply_fixed(sigma, trace) is not ZERO


def socle(problem):
    u = problem.u
    s = u.s
    a, b = u.a, u.b
    if _on_bad_line(u):
        pi = _pi_datum(problem.pi)
        return SocleResult((bad_line_datum(pi, u),), BAD_PARITY)
    if s.twice > a - 1 or s.twice < -(b - 1):
        pi = _pi_datum(problem.pi)
        return SocleResult((composite_socle(pi, u),), LARGE_S)
    if s == 0:
        E = _needs_E(problem.pi)
        pieces = decompose_unitary(u, E)
        return SocleResult(tuple(p for _, p in pieces), UNITARY)
    E = _needs_E(problem.pi)
    if s > 0:
        companion = SpehShape(u.rho, a - s.twice, b)
        outer = SpehShape(u.rho, s.twice, b, HalfInt.from_twice(a))
        regime = MIDDLE_POS
    else:
        companion = SpehShape(u.rho, a, b + s.twice)
        outer = SpehShape(u.rho, a, -s.twice, HalfInt.from_twice(-b))
        regime = MIDDLE_NEG
    if not (outer.s.twice > outer.a - 1 or outer.s.twice < -(outer.b - 1)):
        raise AssertionError("the outer Speh factor must be in the large-s range")
    pieces = decompose_unitary(companion, E)
    out = []
    for sigma_E, sigma in pieces:
        if image_test(sigma, problem):
            out.append(composite_socle(sigma, outer))
    return SocleResult(tuple(out), regime)


def irred_sufficient(problem_or_u, psi=None):
    """'irreducible' when the bad-parity criteria decide it, else 'unknown'.

    Accepts an InductionProblem or a SpehShape with a separately given parameter;
    the shift may be a Fraction outside (1/2)Z.
    """
    if isinstance(problem_or_u, InductionProblem):
        u = problem_or_u.u
        s = u.s.to_fraction()
        psi = psi_of(problem_or_u.pi) if isinstance(problem_or_u.pi, ExtendedMultiSegment) else psi
    else:
        u, s = problem_or_u
        s = Fraction(s) if not isinstance(s, HalfInt) else s.to_fraction()
    if (2 * s).denominator != 1:
        return "irreducible"
    good = is_good_parity(u.rho, u.a, u.b)
    if psi is not None:
        good = good and psi.good_parity
    if s.denominator == 2 and good:
        return "irreducible"
    if s.denominator == 1 and not good:
        return "irreducible"
    return "unknown"


def is_irreducible(problem):
    if irred_sufficient(problem) == "irreducible":
        return True
    if problem.u.s == 0:
        return len(socle(problem).summands) == 1
    plus = socle(problem.at(abs(problem.u.s))).summands
    minus = socle(problem.at(-abs(problem.u.s))).summands
    return len(plus) == 1 and len(minus) == 1 and plus[0] == minus[0]


def first_reducible_point(u, pi, extra=4):
    """Smallest s >= 0 with u|.|^s x| pi reducible."""
    u = u.twisted(0)
    problem = InductionProblem(u, pi)
    # the residue class: integers when the sum is of good parity, half-integers otherwise
    offset = HalfInt(0) if is_good_parity(u.rho, u.a, u.b) else HalfInt.from_twice(1)
    datum = _pi_datum(pi)
    reach = max([abs(g.x) for g in datum.gl] + [abs(g.y) for g in datum.gl]
                + [HalfInt.from_twice(d - 1) for _, d in datum.phi] + [HalfInt(0)])
    bound = max(HalfInt.from_twice(u.a - 1), HalfInt.from_twice(u.b - 1)) + reach + extra
    s = offset
    while s <= bound:
        if not is_irreducible(problem.at(s)):
            return s
        s = s + 1
    raise EngineError(f"no reducible point found up to {bound}")
