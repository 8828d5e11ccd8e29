"""Extended multi-segments, the representations pi(E) and unitary induction at s = 0."""

import itertools
import re
from collections import Counter, OrderedDict
from dataclasses import dataclass

from .clrep import AParameter, ClDatum, make_datum
from .core import DEFAULT_RHO, CuspidalLabel, HalfInt, Segment, SO_ODD, SP, GroupType, half, is_good_parity
from .derivatives import ZERO, shift_down


@dataclass(frozen=True)
class ExtendedSegment:
    rho: CuspidalLabel
    A: HalfInt
    B: HalfInt
    l: int
    eta: int

    def __post_init__(self):
        object.__setattr__(self, "A", half(self.A))
        object.__setattr__(self, "B", half(self.B))
        if self.eta not in (1, -1):
            raise ValueError("eta must be +1 or -1")
        if self.l < 0:
            raise ValueError("l must be nonnegative")
        # eta carries no information once l = b/2
        if 2 * self.l == self.b:
            object.__setattr__(self, "eta", 1)

    @property
    def a(self):
        return int(self.A + self.B) + 1

    @property
    def b(self):
        return int(self.A - self.B) + 1

    def shift(self, t):
        return ExtendedSegment(self.rho, self.A + t, self.B + t, self.l, self.eta)

    def __str__(self):
        return f"([{self.A},{self.B}];{self.l},{'+1' if self.eta > 0 else '-1'})"


def ext(A, B, l, eta, rho=DEFAULT_RHO):
    return ExtendedSegment(rho, half(A), half(B), l, eta)


class ExtendedMultiSegment:
    """Ordered extended segments; the order is part of the data."""

    __slots__ = ("segments", "kind")

    def __init__(self, segments, kind=None):
        segments = tuple(segments)
        if kind is None:
            dim = sum(e.rho.dim * e.a * e.b for e in segments)
            kind = SP if dim % 2 else SO_ODD
        object.__setattr__(self, "segments", segments)
        object.__setattr__(self, "kind", kind)

    def __setattr__(self, name, value):
        raise AttributeError("ExtendedMultiSegment is immutable")

    def __iter__(self):
        return iter(self.segments)

    def __len__(self):
        return len(self.segments)

    def __eq__(self, other):
        return isinstance(other, ExtendedMultiSegment) and (self.segments, self.kind) == (other.segments, other.kind)

    def __hash__(self):
        return hash((self.segments, self.kind))

    def by_rho(self):
        out = OrderedDict()
        for e in self.segments:
            out.setdefault(e.rho, []).append(e)
        return out

    @property
    def group(self):
        dim = sum(e.rho.dim * e.a * e.b for e in self.segments)
        return GroupType.for_dual_dimension(self.kind, dim)

    def __str__(self):
        blocks = self.by_rho()
        if list(blocks) in ([], [DEFAULT_RHO]):
            return "{" + ",".join(str(e) for e in self.segments) + "}"
        return "; ".join(f"{rho.id}: {{" + ",".join(str(e) for e in segs) + "}" for rho, segs in blocks.items())

    def __repr__(self):
        return f"ExtendedMultiSegment({self})"

    def to_json(self):
        return [
            {"rho": e.rho.to_json(), "A": str(e.A), "B": str(e.B), "l": e.l, "eta": e.eta}
            for e in self.segments
        ]

    @classmethod
    def from_json(cls, items, kind=None):
        return cls(
            [ExtendedSegment(CuspidalLabel.from_json(i.get("rho", {})), half(i["A"]), half(i["B"]), int(i["l"]), int(i["eta"]))
             for i in items],
            kind,
        )


_ENTRY = re.compile(r"\s*\(\s*\[\s*([^,\]]+)\s*,\s*([^\]]+)\]\s*;\s*(\d+)\s*,\s*([+-]?1)\s*\)\s*")
_BLOCK = re.compile(r"\s*(?:(\w+)\s*:\s*)?\{([^}]*)\}\s*")


class ESParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def parse_extended(text, labels=None, kind=None):
    """'{([3,-1];2,-1),([3,1];0,-1)}' or 'rho: {...}; sigma: {...}'."""
    labels = labels or {}
    segments = []
    pos = 0
    while pos < len(text):
        m = _BLOCK.match(text, pos)
        if not m:
            raise ESParseError("expected '{...}'", pos)
        rid = m.group(1)
        rho = labels.get(rid, CuspidalLabel(rid)) if rid else labels.get("rho", DEFAULT_RHO)
        body, body_pos = m.group(2), m.start(2)
        if body.strip():
            cur = 0
            for part in _split_entries(body):
                em = _ENTRY.fullmatch(part)
                if not em:
                    raise ESParseError(f"bad extended segment {part.strip()!r}", body_pos + cur)
                try:
                    segments.append(ExtendedSegment(rho, HalfInt.parse(em.group(1)), HalfInt.parse(em.group(2)),
                                                    int(em.group(3)), int(em.group(4))))
                except ValueError as err:
                    raise ESParseError(str(err), body_pos + cur) from None
                cur += len(part) + 1
        pos = m.end()
        if pos < len(text):
            if text[pos] != ";":
                raise ESParseError("expected ';' between blocks", pos)
            pos += 1
    return ExtendedMultiSegment(segments, kind)


def _split_entries(body):
    parts, depth, cur = [], 0, ""
    for ch in body:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if ch == "," and depth == 0:
            parts.append(cur)
            cur = ""
        else:
            cur += ch
    parts.append(cur)
    return parts


# ---------------------------------------------------------------------------


def validate(E):
    """(ok, diagnostics)."""
    problems = []
    for e in E:
        if not (e.A - e.B).is_integer() or e.A < e.B:
            problems.append(f"segment {e}: A - B must be a nonnegative integer")
            continue
        if (e.A + e.B) < 0:
            problems.append(f"segment {e}: A + B must be nonnegative")
        if 2 * e.l > e.b:
            problems.append(f"segment {e}: l must be at most b/2")
        if not is_good_parity(e.rho, e.a, e.b):
            problems.append(f"segment {e}: rho x S_{e.a} x S_{e.b} is not of good parity")
    for rho, segs in E.by_rho().items():
        for i, j in itertools.combinations(range(len(segs)), 2):
            if segs[j].B < segs[i].B:
                problems.append(f"order: B_i < B_j must force i < j ({segs[j]} comes after {segs[i]})")
    dim = sum(e.rho.dim * e.a * e.b for e in E)
    if (E.kind == SP) != (dim % 2 == 1):
        problems.append(f"dimension: {dim} does not fit a dual group of {E.kind}")
    sign = 1
    for e in E:
        sign *= (-1) ** (e.b // 2 + e.l) * e.eta ** e.b
    if sign != 1:
        problems.append("sign condition: the product of (-1)^(floor(b/2)+l) eta^b is -1")
    return not problems, problems


class InvalidExtendedMultiSegment(ValueError):
    pass


def _require_valid(E):
    ok, problems = validate(E)
    if not ok:
        raise InvalidExtendedMultiSegment("; ".join(problems))


def psi_of(E):
    return AParameter([(e.rho, e.a, e.b) for e in E], kind=E.kind)


def _is_nonnegative_ddr(segs):
    if any(e.B < 0 for e in segs):
        return False
    return all(segs[i + 1].B > segs[i].A for i in range(len(segs) - 1))


def _ddr_shifts(segs):
    """Smallest shifts making the segments nonnegative and pairwise disjoint, in order."""
    shifts = []
    top = None
    for e in segs:
        t = max(0, -(e.B.twice // 2))
        if top is not None:
            t = max(t, (top - e.B).twice // 2 + 1)
        shifts.append(t)
        top = e.A + t
    return shifts


def _ddr_datum(segments_by_rho):
    gl, counts, signs = [], {}, {}
    for rho, segs in segments_by_rho.items():
        for e in segs:
            for j in range(e.l):
                gl.append(Segment(rho, e.B + j, -e.A + j))
            for k in range(int(e.A - e.B) - 2 * e.l + 1):
                key = (rho, (e.B + e.l + k).twice + 1)
                counts[key] = counts.get(key, 0) + 1
                sign = (-1) ** k * e.eta
                if signs.setdefault(key, sign) != sign:
                    return ZERO
    try:
        return make_datum(gl, Counter(counts), signs)
    except ValueError:
        return ZERO


def build_pi(E, shifts=None):
    """pi(E) as a ClDatum, or ZERO.

    `shifts` maps rho to a list of t_i; the default is the smallest choice
    making every block non-negative with pairwise disjoint segments.
    """
    _require_valid(E)
    blocks = E.by_rho()
    chosen = {rho: _ddr_shifts(segs) for rho, segs in blocks.items()}
    if shifts is not None:
        for rho, ts in shifts.items():
            if len(ts) != len(blocks.get(rho, [])) or any(t < 0 for t in ts):
                raise ValueError(f"shifts for {rho} do not fit the block")
            moved = [e.shift(t) for e, t in zip(blocks[rho], ts)]
            if not _is_nonnegative_ddr(moved):
                raise ValueError(f"shifts for {rho} do not give a non-negative disjoint block")
            chosen[rho] = list(ts)
    shifted = {rho: [e.shift(t) for e, t in zip(segs, chosen[rho])] for rho, segs in blocks.items()}
    pi = _ddr_datum(shifted)
    if pi is ZERO:
        return ZERO
    for rho, segs in blocks.items():
        for e, t in zip(segs, chosen[rho]):
            for u in range(t, 0, -1):
                pi = shift_down(pi, rho, e.B + u, e.A + u)
                if pi is ZERO:
                    return ZERO
    return pi


def is_nonvanishing(E):
    return build_pi(E) is not ZERO


def pair_prefilter(B, l, eta):
    """Quoted sufficient criterion for the added pair to keep pi(E) nonzero."""
    return B + l >= 0 or (B + l >= HalfInt.from_twice(-1) and eta == 1)


IRREDUCIBLE_BAD = "irreducible via bad parity"


def insert_pair(E, rho, A, B, l, eta):
    first = ExtendedSegment(rho, A, B, l, eta)
    second = ExtendedSegment(rho, A, B, l, (-1) ** int(A - B) * eta)
    segs = list(E.segments)
    pos = len(segs)
    for i, e in enumerate(segs):
        if e.rho == rho and e.B > B:
            pos = i
            break
    else:
        # after the last segment of this rho
        idx = [i for i, e in enumerate(segs) if e.rho == rho]
        pos = idx[-1] + 1 if idx else len(segs)
    return ExtendedMultiSegment(segs[:pos] + [first, second] + segs[pos:], E.kind)


def pair_choices(b):
    out = []
    for l in range(b // 2 + 1):
        if 2 * l == b:
            out.append((l, 1))
        else:
            out += [(l, 1), (l, -1)]
    return out


def decompose_unitary(u, E):
    """List of E_(l,eta) with u_rho(a,b) x| pi(E) = sum of pi(E_(l,eta)), or IRREDUCIBLE_BAD."""
    _require_valid(E)
    if u.s != 0:
        raise ValueError("decompose_unitary needs s = 0")
    if not is_good_parity(u.rho, u.a, u.b):
        return IRREDUCIBLE_BAD
    out = []
    for l, eta in pair_choices(u.b):
        cand = insert_pair(E, u.rho, u.A, u.B, l, eta)
        pi = build_pi(cand)
        if pi is not ZERO:
            out.append((cand, pi))
    return out


def canonical_order(summands):
    return sorted(summands, key=lambda e: (e.rho.id, e.B.twice, e.A.twice))


def packet_of(psi):
    """[(E, pi(E))] over all E with psi_E = psi, nonvanishing, distinct pi."""
    if not psi.good_parity:
        raise ValueError("packet_of needs a parameter of good parity")
    base = []
    for rho, a, b in psi.summands:
        A = HalfInt.from_twice(a + b - 2)
        B = HalfInt.from_twice(a - b)
        base.append((rho, A, B, b))
    base.sort(key=lambda t: (t[0].id, t[2].twice, t[1].twice))
    out, seen = [], set()
    for choice in itertools.product(*[pair_choices(b) for _, _, _, b in base]):
        E = ExtendedMultiSegment(
            [ExtendedSegment(rho, A, B, l, eta) for (rho, A, B, _), (l, eta) in zip(base, choice)],
            psi.group.kind,
        )
        if not validate(E)[0]:
            continue
        pi = build_pi(E)
        if pi is ZERO or pi in seen:
            continue
        seen.add(pi)
        out.append((E, pi))
    return out
