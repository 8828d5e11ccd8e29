"""Derivatives of representations of the classical group and their inverses.

The highest rho|.|^x-derivative (x != 0) is computed by a matching model on
the Langlands datum: segments of the GL part and their mirrors, together with
the tempered summands S_{2x+1} (contributors) and S_{2x-1} (obstructors).
Socles are found by searching the finitely many data one step up and keeping
the one whose highest derivative lands back on the input.
"""

import os
from collections import Counter
from dataclasses import dataclass
from functools import lru_cache

from .clrep import ClDatum, ClValidationError, make_datum
from .core import HalfInt, Segment, half, is_good_exponent
from .glrep import (
    GLDatum,
    NotReduced,
    gl_left_Delta01_derivative_max,
    gl_left_derivative_max,
    gl_left_Z01_derivative_max,
    gl_socle_cuspidal_left,
    gl_socle_Delta01_power,
    gl_socle_Z01_power,
)

CACHE_SIZE = int(os.environ.get("ARTIFACT_CACHE_SIZE", "65536"))

ONE = HalfInt(1)


class Zero:
    """The zero representation."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "ZERO"

    def __str__(self):
        return "0"

    def __bool__(self):
        return False


ZERO = Zero()


class DerivativeError(ValueError):
    pass


@dataclass(frozen=True)
class Cuspidal:
    rho: object
    x: HalfInt

    def __post_init__(self):
        object.__setattr__(self, "x", half(self.x))
        if self.x == 0:
            raise DerivativeError("the plain rho-derivative is not available")

    def __str__(self):
        return f"{self.rho.id}|.|^{self.x}"


@dataclass(frozen=True)
class DeltaZeroMinusOne:
    rho: object

    def __str__(self):
        return f"D_{self.rho.id}[0,-1]"


@dataclass(frozen=True)
class ZZeroOne:
    rho: object

    def __str__(self):
        return f"Z_{self.rho.id}[0,1]"


class DerivativeTrace(tuple):
    """Ordered ((kind, k), ...) exactly as produced."""

    def exponents(self):
        return [k for _, k in self]

    def to_json(self):
        out = []
        for kind, k in self:
            item = {"rho": kind.rho.id, "k": k}
            if isinstance(kind, Cuspidal):
                item.update(kind="cuspidal", x=str(kind.x))
            elif isinstance(kind, DeltaZeroMinusOne):
                item["kind"] = "delta01"
            else:
                item["kind"] = "z01"
            out.append(item)
        return out


def _rho_segs(datum, rho):
    return [s for s in datum.gl.segs if s.rho == rho]


# ---------------------------------------------------------------------------
# highest rho|.|^x-derivative


def _greedy(contributors, obstructors, forbidden=None):
    """Each obstructor, by decreasing y, takes the free contributor with the
    smallest y above it.  Items are (y, tag, payload).  Returns free contributors."""
    free = sorted(contributors, key=lambda c: c[0].twice)
    for ob in sorted(obstructors, key=lambda o: -o[0].twice):
        for i, c in enumerate(free):
            if c[0] > ob[0] and not (forbidden and forbidden(ob, c)):
                del free[i]
                break
    return free


@lru_cache(maxsize=CACHE_SIZE)
def d_max_cuspidal(pi, rho, x):
    """(D^max_{rho|.|^x}(pi), k)."""
    x = half(x)
    if x == 0:
        raise DerivativeError("x must be nonzero")
    if x < 0:
        tau, k = gl_left_derivative_max(pi.gl, rho, x)
        return (pi if k == 0 else ClDatum(tau, pi.phi, pi.eps)), k
    if is_good_exponent(rho, x):
        return _good_positive(pi, rho, x)
    return _bad_positive(pi, rho, x)


def _good_positive(pi, rho, x):
    x1 = x - 1
    pair = Segment(rho, x1, -x)
    d_plus, d_minus = x.twice + 1, x.twice - 1
    counts = pi.tempered_counts()
    signs = pi.eps.as_dict()
    m = counts[(rho, d_plus)]
    mm = counts[(rho, d_minus)] if d_minus > 0 else 0
    segs = _rho_segs(pi, rho)
    t = segs.count(pair)
    delta = 0
    if x >= 1 and m and mm and signs[(rho, d_plus)] * signs[(rho, d_minus)] != (-1) ** t:
        delta = 1

    contributors, obstructors = [], []
    for s in segs:
        if s == pair:
            continue
        if s.x == x:
            contributors.append((s.y, "reg", s))
        if s.y == -x:
            contributors.append((-s.x, "mir", s))
        if s.x == x1:
            obstructors.append((s.y, "reg", s))
        if s.y == -x1 and s.x < x1:
            obstructors.append((-s.x, "mir", s))
    contributors += [(-x, "lone", None)] * (m - delta)
    obstructors += [(-x1, "lone", None)] * (mm - delta)

    free = _greedy(contributors, obstructors)
    if not free:
        return pi, 0

    gl = list(pi.gl.segs)
    lone = 0
    for _, tag, s in free:
        if tag == "reg":
            gl.remove(s)
            gl.append(Segment(rho, x1, s.y))
        elif tag == "mir":
            gl.remove(s)
            gl.append(Segment(rho, s.x, -x1))
        else:
            lone += 1

    new_counts = Counter(counts)
    new_signs = dict(signs)
    if x == HalfInt.from_twice(1):
        new_counts[(rho, d_plus)] = m - lone
    else:
        pool = t + delta
        if pool:
            delta_new = (delta + lone) % 2
            t_new = pool - delta_new
        else:
            delta_new = t_new = 0
        for _ in range(t):
            gl.remove(pair)
        gl.extend([pair] * t_new)
        m_new = m - delta - lone + delta_new
        mm_new = mm - delta + lone + delta_new
        new_counts[(rho, d_plus)] = m_new
        new_counts[(rho, d_minus)] = mm_new
        if mm == 0 and mm_new > 0:
            e_plus = signs[(rho, d_plus)]
            if delta_new:
                new_signs[(rho, d_minus)] = -e_plus * (-1) ** t_new
            elif m_new > 0:
                new_signs[(rho, d_minus)] = e_plus * (-1) ** t_new
            else:
                new_signs[(rho, d_minus)] = e_plus
    return make_datum(gl, +new_counts, new_signs), len(free)


def _bad_positive(pi, rho, x):
    x1 = x - 1
    pair = Segment(rho, x1, -x)
    zero_plus = Segment(rho, x, -x)
    zero_minus = Segment(rho, x1, -x1)
    segs = _rho_segs(pi, rho)
    t = segs.count(pair)
    pieces_plus = segs.count(zero_plus)
    pieces_minus = segs.count(zero_minus) if x1 >= 0 else 0

    contributors, obstructors = [], []
    for s in segs:
        if (s.x + s.y) == 0:
            continue
        if s == pair and t >= 2:
            # copies of D[x-1,-x] cancel against each other's mirrors
            continue
        if s.x == x:
            contributors.append((s.y, "reg", s))
        if s.y == -x:
            contributors.append((-s.x, "mir", s))
        if s.x == x1:
            obstructors.append((s.y, "reg", s))
        if s.y == -x1 and s.x < x1:
            obstructors.append((-s.x, "mir", s))
    contributors += [(-x, "lone", None)] * (2 * pieces_plus)
    obstructors += [(-x1, "lone", None)] * (2 * pieces_minus)

    def own_mirror(ob, c):
        return ob[1] == "reg" and c[1] == "mir" and ob[2] == pair and c[2] == pair

    free = _greedy(contributors, obstructors, own_mirror)
    if not free:
        return pi, 0

    gl = list(pi.gl.segs)
    lone = 0
    for _, tag, s in free:
        if tag == "reg":
            gl.remove(s)
            gl.append(Segment(rho, x1, s.y))
        elif tag == "mir":
            gl.remove(s)
            gl.append(Segment(rho, s.x, -x1))
        else:
            lone += 1
    # stripped copies fill whole pieces first
    for _ in range(lone // 2):
        gl.remove(zero_plus)
        gl.append(zero_minus)
    if lone % 2:
        gl.remove(zero_plus)
        gl.append(pair)
    gl = [s for s in gl if not s.degenerate]
    return ClDatum(gl, pi.phi, pi.eps), len(free)


def is_reduced(pi, rho, x):
    return d_max_cuspidal(pi, rho, half(x))[1] == 0


# ---------------------------------------------------------------------------
# socle of (rho|.|^x)^r x| pi


def soc_cuspidal(pi, rho, x, r=1):
    x = half(x)
    if x == 0:
        raise DerivativeError("x must be nonzero")
    for _ in range(r):
        pi = _soc_one(pi, rho, x)
    return pi


@lru_cache(maxsize=CACHE_SIZE)
def _soc_one(pi, rho, x):
    if x < 0:
        return ClDatum(gl_socle_cuspidal_left(pi.gl, rho, x), pi.phi, pi.eps)
    target = d_max_cuspidal(pi, rho, x)
    target = (target[0], target[1] + 1)
    hits = set()
    for cand in _candidates_positive(pi, rho, x):
        if d_max_cuspidal(cand, rho, x) == target:
            hits.add(cand)
    if len(hits) != 1:
        raise DerivativeError(f"socle search for {rho}|.|^{x} x {pi} found {len(hits)} candidates")
    return hits.pop()


def _candidates_positive(pi, rho, x):
    x1 = x - 1
    good = is_good_exponent(rho, x)
    segs = _rho_segs(pi, rho)
    gl = list(pi.gl.segs)
    counts = pi.tempered_counts()
    signs = pi.eps.as_dict()
    pair = Segment(rho, x1, -x)
    d_plus, d_minus = x.twice + 1, x.twice - 1

    bases = []
    for s in set(segs):
        if s.x == x1 and (s.x + s.y) < 0:
            new = Segment(rho, x, s.y)
            if (new.x + new.y) < 0 or (not good and (new.x + new.y) == 0):
                bases.append((_swap(gl, s, new), counts))
        if s.y == -x1 and s.x <= x1 and (good is False or s.x < x1):
            bases.append((_swap(gl, s, Segment(rho, s.x, -x)), counts))
    bases.append((gl + [Segment(rho, -x, -x)], counts))
    if good:
        if d_minus > 0 and counts[(rho, d_minus)]:
            c = Counter(counts)
            c[(rho, d_minus)] -= 1
            c[(rho, d_plus)] += 1
            bases.append((gl, c))
        if d_minus == 0:
            c = Counter(counts)
            c[(rho, d_plus)] += 1
            bases.append((gl, c))

    for base_gl, base_counts in bases:
        if not good:
            try:
                yield make_datum(base_gl, +base_counts, signs)
            except ClValidationError:
                pass
            continue
        yield from _tempered_variants(base_gl, base_counts, signs, rho, x, pair)


def _swap(gl, old, new):
    out = list(gl)
    out.remove(old)
    out.append(new)
    return out


def _tempered_variants(gl, counts, signs, rho, x, pair):
    """Every redistribution of D[x-1,-x] copies against S_{2x+1} (+ S_{2x-1})
    with every choice of the two signs involved."""
    d_plus, d_minus = x.twice + 1, x.twice - 1
    t = gl.count(pair)
    m = counts[(rho, d_plus)]
    mm = counts[(rho, d_minus)] if d_minus > 0 else 0
    low = -(m // 2 if d_minus == 0 else min(m, mm))
    rest = [s for s in gl if s != pair]
    keys = [(rho, d_plus)] + ([(rho, d_minus)] if d_minus > 0 else [])
    for j in range(low, t + 1):
        c = Counter(counts)
        if d_minus == 0:
            c[(rho, d_plus)] = m + 2 * j
        else:
            c[(rho, d_plus)] = m + j
            c[(rho, d_minus)] = mm + j
        new_gl = rest + [pair] * (t - j)
        for sp in (1, -1):
            for sm in (1, -1):
                s = dict(signs)
                s[keys[0]] = sp
                if len(keys) > 1:
                    s[keys[1]] = sm
                elif sm == -1:
                    continue
                try:
                    yield make_datum(new_gl, +c, s)
                except ClValidationError:
                    pass


# ---------------------------------------------------------------------------
# D[0,-1]


def _require_reduced(pi, rho, x, what):
    if not is_reduced(pi, rho, x):
        raise NotReduced(f"{pi} is not {rho}|.|^{x}-reduced ({what})")


def d_max_delta01(pi, rho):
    _require_reduced(pi, rho, -1, "D[0,-1]-derivative")
    tau, k = gl_left_Delta01_derivative_max(pi.gl, rho)
    return (pi if k == 0 else ClDatum(tau, pi.phi, pi.eps)), k


def soc_delta01(pi, rho, r=1):
    _require_reduced(pi, rho, -1, "D[0,-1]-socle")
    if r == 0:
        return pi
    return ClDatum(gl_socle_Delta01_power(pi.gl, rho, r), pi.phi, pi.eps)


# ---------------------------------------------------------------------------
# Z[0,1] on L((rho|.|^-1)^s, D[0,-1]^t; pi(phi, eps))


@dataclass(frozen=True)
class SpecialShape:
    s: int
    t: int
    counts: Counter
    signs: dict

    def __hash__(self):
        return hash((self.s, self.t))


def special_shape(pi, rho):
    """(s, t, counts, signs) when pi has the special shape, else None."""
    s = t = 0
    for g in pi.gl.segs:
        if g.rho != rho:
            return None
        if (g.x, g.y) == (-1, -1):
            s += 1
        elif (g.x, g.y) == (0, -1):
            t += 1
        else:
            return None
    return s, t, pi.tempered_counts(), pi.eps.as_dict()


def special_datum(rho, s, t, counts, signs):
    gl = [Segment(rho, half(-1), half(-1))] * s + [Segment(rho, half(0), half(-1))] * t
    return make_datum(gl, +Counter(counts), signs)


def _special_invariants(rho, s, t, counts, signs):
    r1, r3 = (rho, 1), (rho, 3)
    m, m3 = counts[r1], counts[r3]
    delta = int(bool(m and m3 and signs[r1] * signs[r3] != (-1) ** t))
    return m, m3, delta


def z01_special_case(rho, s, t, counts, signs):
    """Which of the four cases of the special Z[0,1]-derivative formula applies."""
    m, m3, delta = _special_invariants(rho, s, t, counts, signs)
    if delta == 1:
        return 1 if m % 2 == (s + 1) % 2 else 2
    return 3 if m % 2 == (s + 1) % 2 else 4


def d_max_z01_special(rho, s, t, counts, signs):
    """Highest Z[0,1]-derivative of L((rho|.|^-1)^s, D[0,-1]^t; pi(phi, eps))."""
    counts = Counter(counts)
    signs = dict(signs)
    r1, r3 = (rho, 1), (rho, 3)
    m, m3, delta = _special_invariants(rho, s, t, counts, signs)
    if m3 != delta or s > m - delta:
        raise NotReduced(f"L((rho|.|^-1)^{s}, D[0,-1]^{t}; ...) is not rho|.|^1-reduced")

    def flip_rho(sg):
        sg = dict(sg)
        sg[r1] = -sg[r1]
        return sg

    case = z01_special_case(rho, s, t, counts, signs)
    if case == 1:
        k = t
        if t % 2 == 0:
            out = (s, 0, counts, signs)
        else:
            c = Counter(counts)
            c[r1] += 1
            c[r3] -= 1
            out = (s + 1, 0, c, signs)
    elif case == 2:
        k = t + 1
        c = Counter(counts)
        if t % 2 == 0 and s == 0:
            c[r1] -= 1
            c[r3] -= 1
            out = (0, 0, c, flip_rho(signs) if c[r1] else signs)
        elif t % 2 == 0:
            c[r1] -= 2
            out = (s - 1, 0, c, signs)
        else:
            c[r1] -= 1
            c[r3] -= 1
            out = (s, 0, c, signs)
    elif case == 3:
        if t == 0:
            k = 0
            out = (s, t, counts, signs)
        elif t % 2 == 0:
            k = t - 1
            c = Counter(counts)
            c[r1] += 2
            out = (s + 1, 0, c, signs)
        else:
            k = t - 1
            out = (s, 1, counts, signs)
    else:
        k = t
        if t % 2 == 1 and m > s == 0:
            out = (0, 0, counts, flip_rho(signs))
        elif t % 2 == 1 and m > s > 0:
            c = Counter(counts)
            c[r1] -= 2
            out = (s - 1, 1, c, signs)
        else:
            out = (s, 0, counts, signs)
    return special_datum(rho, *out), k


def z01_inverse_case(rho, s1, t1, counts, k):
    """Which of the twelve inverse cases applies to pi' = (s', t', phi') and k > 0."""
    if k <= 0:
        raise DerivativeError("k must be positive")
    m1 = counts[(rho, 1)]
    has3 = counts[(rho, 3)] > 0
    if k % 2 == 0:
        if t1 == 1:
            return 1
        if t1 == 0:
            if m1 % 2 == s1 % 2:
                return 2
            return 3 if has3 else 4
    else:
        if t1 == 1:
            return 5
        if t1 == 0:
            if m1 == s1:
                return 6
            if s1 == 0 < m1:
                if m1 % 2 == 0:
                    return 7
                return 8 if has3 else 9
            if 0 < s1 < m1:
                if m1 % 2 == s1 % 2:
                    return 10
                return 11 if has3 else 12
    raise DerivativeError(f"(s', t', m') = ({s1}, {t1}, {m1}) with k = {k} is outside the twelve cases")


def z01_inverse(rho, s1, t1, counts, signs, k):
    """The unique pi with highest Z[0,1]-derivative pi' = (s', t', phi', eps') of exponent k."""
    counts = Counter(counts)
    signs = dict(signs)
    r1, r3 = (rho, 1), (rho, 3)
    case = z01_inverse_case(rho, s1, t1, counts, k)
    c = Counter(counts)
    sg = dict(signs)
    if case == 1:
        out = (s1, k + 1, c, sg)
    elif case in (2, 3, 6):
        out = (s1, k, c, sg)
    elif case in (4, 9):
        if case == 9:
            sg[r1] = -signs[r1]
        sg[r3] = (-1) ** k * sg[r1]
        c[r1] += 1
        c[r3] += 1
        out = (s1, k - 1, c, sg)
    elif case == 5:
        c[r1] += 2
        out = (s1 + 1, k, c, sg)
    elif case == 7:
        sg[r1] = -signs[r1]
        out = (0, k, c, sg)
    elif case == 8:
        c[r1] += 2
        out = (1, k - 1, c, sg)
    elif case == 10:
        c[r1] -= 2
        out = (s1 - 1, k + 1, c, sg)
    elif case == 11:
        c[r1] += 2
        out = (s1 + 1, k - 1, c, sg)
    else:
        sg[r3] = (-1) ** (k - 1) * sg[r1]
        c[r1] -= 1
        c[r3] += 1
        out = (s1 - 1, k, c, sg)
    return special_datum(rho, *out)


def _special_parts(pi, rho):
    shape = special_shape(pi, rho)
    if shape is None:
        raise DerivativeError(f"{pi} is not of the shape L((rho|.|^-1)^s, D[0,-1]^t; pi(phi, eps))")
    return shape


def _special_dmax(pi, rho):
    return d_max_z01_special(rho, *_special_parts(pi, rho))


def _special_soc(pi, rho, k):
    if k == 0:
        return pi
    base, k0 = _special_dmax(pi, rho)
    s1, t1, counts, signs = _special_parts(base, rho)
    return z01_inverse(rho, s1, t1, counts, signs, k0 + k)


def _split_for_z01(pi, rho):
    """GL part away from rho|.|^-1 and D[0,-1], and the special-shape remainder."""
    minus_one = Segment(rho, half(-1), half(-1))
    delta01 = Segment(rho, half(0), half(-1))
    rest, special = [], []
    for g in pi.gl.segs:
        (special if g in (minus_one, delta01) else rest).append(g)
    for g in rest:
        if g.rho == rho and not is_good_exponent(rho, g.x):
            raise DerivativeError("the Z[0,1] algorithm needs pi of good parity")
    return rest, ClDatum(special, pi.phi, pi.eps)


def _z01_common(pi, rho):
    _require_reduced(pi, rho, 1, "Z[0,1]")
    rest, pi_a = _split_for_z01(pi, rho)
    pi_a1, l1 = d_max_cuspidal(pi_a, rho, ONE)
    pi_a2, k1 = _special_dmax(pi_a1, rho)
    zero, one = Segment(rho, half(0), half(0)), Segment(rho, ONE, ONE)
    tau = GLDatum(rest + [zero] * k1 + [one] * (k1 + l1))
    return tau, pi_a2, zero, one


def _z01_finish(tau_new, pi_a2, rho, zero, one):
    counts = tau_new.counts()
    k2 = counts[zero]
    l2 = counts[one] - k2
    if l2 < 0:
        raise DerivativeError("step 4 produced fewer rho|.|^1 than rho")
    rest = [g for g in tau_new.segs if g not in (zero, one)]
    pi_b1 = _special_soc(pi_a2, rho, k2)
    pi_b = soc_cuspidal(pi_b1, rho, ONE, l2)
    return ClDatum(rest + list(pi_b.gl.segs), pi_b.phi, pi_b.eps)


def d_max_z01_general(pi, rho):
    tau, pi_a2, zero, one = _z01_common(pi, rho)
    tau_new, k = gl_left_Z01_derivative_max(tau, rho)
    if k == 0:
        return pi, 0
    return _z01_finish(tau_new, pi_a2, rho, zero, one), k


def soc_z01_power(pi, rho, k):
    if k == 0:
        return pi
    tau, pi_a2, zero, one = _z01_common(pi, rho)
    tau_new = gl_socle_Z01_power(tau, rho, k)
    return _z01_finish(tau_new, pi_a2, rho, zero, one)


# ---------------------------------------------------------------------------
# composite derivatives


def apply_kind(pi, kind):
    if isinstance(kind, Cuspidal):
        return d_max_cuspidal(pi, kind.rho, kind.x)
    if isinstance(kind, DeltaZeroMinusOne):
        return d_max_delta01(pi, kind.rho)
    return d_max_z01_general(pi, kind.rho)


def socle_kind(pi, kind, k):
    if k == 0:
        return pi
    if isinstance(kind, Cuspidal):
        return soc_cuspidal(pi, kind.rho, kind.x, k)
    if isinstance(kind, DeltaZeroMinusOne):
        return soc_delta01(pi, kind.rho, k)
    return soc_z01_power(pi, kind.rho, k)


def chain_kinds(rho, start, end):
    """The derivative kinds of D_{rho|.|^start, ..., rho|.|^end}, first applied first,
    with the crossing of 0 replaced as prescribed for composite derivatives."""
    start, end = half(start), half(end)
    if not (start - end).is_integer():
        raise DerivativeError("start and end must differ by an integer")
    step = 1 if end >= start else -1
    exps = [start + step * i for i in range(abs(int(end - start)) + 1)]
    if not any(e == 0 for e in exps):
        return [Cuspidal(rho, e) for e in exps]
    if step == -1 and not end < 0:
        raise DerivativeError("a descending chain through 0 must end below 0")
    if step == 1 and not end > 0:
        raise DerivativeError("an ascending chain through 0 must end above 0")
    kinds = []
    skip = False
    for e in exps:
        if skip:
            skip = False
            continue
        if e == 0:
            if step == -1:
                kinds += [Cuspidal(rho, half(-1)), DeltaZeroMinusOne(rho)]
            else:
                kinds += [Cuspidal(rho, ONE), ZZeroOne(rho)]
            skip = True
        else:
            kinds.append(Cuspidal(rho, e))
    return kinds


def spliced_partner(kinds, i):
    """True when kinds[i] is the rho|.|^{+-1} step of a splice (its exponent is not counted)."""
    return i + 1 < len(kinds) and isinstance(kinds[i + 1], (DeltaZeroMinusOne, ZZeroOne))


def composite_d_max(pi, rho, start, end):
    kinds = chain_kinds(rho, start, end)
    return run_chain(pi, kinds)


def run_chain(pi, kinds):
    trace = []
    for kind in kinds:
        pi, k = apply_kind(pi, kind)
        trace.append((kind, k))
    return pi, DerivativeTrace(trace)


def rebuild(result, trace):
    """Invert a trace: the representation whose chain of highest derivatives is `trace`
    ending at `result`.  Returns ZERO when an exponent is negative."""
    pi = result
    for kind, k in reversed(trace):
        if k < 0:
            return ZERO
        if apply_kind(pi, kind)[1] != 0:
            return ZERO
        pi = socle_kind(pi, kind, k)
    return pi


def bump_trace(trace, amount=1):
    """Add `amount` to every counted exponent; the rho|.|^{+-1} half of a splice is left alone."""
    kinds = [kind for kind, _ in trace]
    out = []
    for i, (kind, k) in enumerate(trace):
        out.append((kind, k if spliced_partner(kinds, i) else k + amount))
    return DerivativeTrace(out)


def apply_fixed(pi, trace):
    """D^{(k_1)} then D^{(k_2)} ... with prescribed exponents.

    A step whose prescribed exponent exceeds the highest one gives ZERO; a
    smaller exponent keeps the irreducible top piece soc(X^{kmax-k} x| D^max).
    """
    for kind, k in trace:
        res, kmax = apply_kind(pi, kind)
        if k > kmax:
            return ZERO
        pi = socle_kind(res, kind, kmax - k)
    return pi


def shift_down(pi, rho, lo, hi):
    """The representation pi'' with soc(Z[lo, hi] x| pi'') = pi, or ZERO."""
    res, trace = run_chain(pi, chain_kinds(rho, lo, hi))
    lowered = bump_trace(trace, -1)
    if any(k < 0 for _, k in lowered):
        return ZERO
    return rebuild(res, lowered)


def speh_chains(rho, a, b, s):
    """Derivative chains characterising soc(u(a,b)|.|^s x| pi) for s outside the middle range."""
    A = HalfInt.from_twice(a + b - 2)
    B = HalfInt.from_twice(a - b)
    s = half(s)
    if s.twice > a - 1:
        return [chain_kinds(rho, B + s - i, A + s - i) for i in range(a)]
    if s.twice < -(b - 1):
        return [chain_kinds(rho, B + s + j, -A + s + j) for j in range(b)]
    raise DerivativeError(f"s = {s} lies in the middle range for u({a},{b})")


def composite_socle(pi, u):
    """soc(u_rho(a,b)|.|^s x| pi) for s > (a-1)/2 or s < -(b-1)/2."""
    chains = speh_chains(u.rho, u.a, u.b, u.s)
    kinds = [k for chain in chains for k in chain]
    res, trace = run_chain(pi, kinds)
    return rebuild(res, bump_trace(trace, 1))
