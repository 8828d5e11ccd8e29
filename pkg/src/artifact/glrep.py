"""Langlands data for GL_n and the left/right derivative calculus.

A GLDatum is a sorted multiset of Steinberg segments; it names the unique
irreducible subrepresentation of the product taken in increasing x+y order.
"""

import re
from collections import Counter
from dataclasses import dataclass

from .core import DEFAULT_RHO, CuspidalLabel, HalfInt, Segment, half, segments_linked


class GLDatum:
    __slots__ = ("segs",)

    def __init__(self, segs=()):
        segs = [s for s in segs if not s.degenerate]
        object.__setattr__(self, "segs", tuple(sorted(segs, key=Segment.sort_key)))

    def __setattr__(self, name, value):
        raise AttributeError("GLDatum is immutable")

    def __eq__(self, other):
        return isinstance(other, GLDatum) and self.segs == other.segs

    def __hash__(self):
        return hash(self.segs)

    def __len__(self):
        return len(self.segs)

    def __iter__(self):
        return iter(self.segs)

    def __bool__(self):
        return bool(self.segs)

    def __add__(self, other):
        return GLDatum(self.segs + tuple(other))

    def without(self, seg, count=1):
        segs = list(self.segs)
        for _ in range(count):
            segs.remove(seg)
        return GLDatum(segs)

    def counts(self):
        return Counter(self.segs)

    def degree(self):
        return sum(s.length * s.rho.dim for s in self.segs)

    def dual(self):
        """Contragredient: every [x,y] becomes [-y,-x]."""
        return GLDatum(s.dual() for s in self.segs)

    def shift(self, s):
        return GLDatum(g.shift(s) for g in self.segs)

    def __str__(self):
        return render_gl(self)

    def __repr__(self):
        return f"GLDatum({render_gl(self)})"


def gl(*pairs, rho=DEFAULT_RHO):
    """Shorthand: gl((0,-1), (1,1)) is L(D[0,-1], D[1,1])."""
    return GLDatum(Segment(rho, half(x), half(y)) for x, y in pairs)


def segment_token(s):
    name = "D" if s.rho == DEFAULT_RHO else f"D_{s.rho.id}"
    return f"{name}[{s.x},{s.y}]"


def render_segments(segs):
    out = []
    for s, m in _runs(segs):
        tok = segment_token(s)
        out.append(tok if m == 1 else f"{tok}^{m}")
    return out


def _runs(segs):
    runs = []
    for s in segs:
        if runs and runs[-1][0] == s:
            runs[-1][1] += 1
        else:
            runs.append([s, 1])
    return runs


def render_gl(tau):
    return "L(" + ",".join(render_segments(tau.segs)) + ")"


_TOKEN = re.compile(
    r"\s*(?:(?P<kind>[DZ])(?:_(?P<rid>\w+))?\[(?P<a>[^,\]]+),(?P<b>[^\]]+)\]"
    r"|(?P<cusp>rho)(?:\|\.\|\^(?P<e>-?[\d/]+))?)"
    r"(?:\^(?P<mult>\d+))?\s*"
)


class GLParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def parse_segment_list(text, labels=None, offset=0):
    """Parse 'D[0,-1]^2, Z[0,1], rho^3' into a list of segments."""
    labels = labels or {}
    segs = []
    pos = 0
    text_len = len(text)
    if not text.strip():
        return segs
    while pos <= text_len:
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise GLParseError("expected a segment", offset + pos)
        mult = int(m.group("mult") or 1)
        if m.group("kind"):
            rho = labels.get(m.group("rid"), CuspidalLabel(m.group("rid"))) if m.group("rid") else labels.get("rho", DEFAULT_RHO)
            try:
                a, b = HalfInt.parse(m.group("a")), HalfInt.parse(m.group("b"))
            except ValueError as err:
                raise GLParseError(str(err), offset + pos) from None
            if m.group("kind") == "D":
                one = [Segment(rho, a, b)]
            else:
                # Z[y,x] is the Langlands datum of singletons y, y+1, ..., x
                one = [Segment(rho, a + i, a + i) for i in range(int(b - a) + 1)]
        else:
            e = HalfInt.parse(m.group("e")) if m.group("e") else HalfInt(0)
            one = [Segment(labels.get("rho", DEFAULT_RHO), e, e)]
        segs.extend(one * mult)
        pos = m.end()
        if pos >= text_len:
            break
        if text[pos] != ",":
            raise GLParseError("expected ','", offset + pos)
        pos += 1
    return segs


def parse_gl(text):
    text = text.strip()
    if not (text.startswith("L(") and text.endswith(")")):
        raise GLParseError("expected L(...)", 0)
    return GLDatum(parse_segment_list(text[2:-1], offset=2))


@dataclass(frozen=True)
class SpehShape:
    rho: CuspidalLabel
    a: int
    b: int
    s: HalfInt = HalfInt(0)

    def __post_init__(self):
        if self.a < 1 or self.b < 1:
            raise ValueError("a and b must be positive")
        object.__setattr__(self, "s", half(self.s))

    @property
    def A(self):
        return HalfInt.from_twice(self.a + self.b - 2)

    @property
    def B(self):
        return HalfInt.from_twice(self.a - self.b)

    def twisted(self, s):
        return SpehShape(self.rho, self.a, self.b, half(s))

    def __str__(self):
        base = f"u({self.a},{self.b})"
        return base if self.s == 0 else f"{base}|.|^{self.s}"


def speh_to_datum(u):
    A, B, s = u.A, u.B, u.s
    return GLDatum(Segment(u.rho, B + s + j, -A + s + j) for j in range(u.b))


# ---------------------------------------------------------------------------
# derivatives


def _match_left(segs, rho, x):
    """Greedy matching of segments starting at x-1 against those starting at x.

    Returns the list of unmatched contributors (segments starting at x).
    """
    contributors = sorted((s for s in segs if s.rho == rho and s.x == x), key=lambda s: s.y.twice)
    obstructors = sorted((s for s in segs if s.rho == rho and s.x == x - 1), key=lambda s: -s.y.twice)
    free = list(contributors)
    for ob in obstructors:
        for i, c in enumerate(free):
            if c.y > ob.y:
                del free[i]
                break
    return free


def gl_left_derivative_max(tau, rho, x):
    x = half(x)
    free = _match_left(tau.segs, rho, x)
    if not free:
        return tau, 0
    segs = list(tau.segs)
    for c in free:
        segs.remove(c)
        segs.append(Segment(rho, x - 1, c.y))
    return GLDatum(segs), len(free)


def gl_right_derivative_max(tau, rho, x):
    res, k = gl_left_derivative_max(tau.dual(), rho, -half(x))
    return res.dual(), k


def gl_socle_cuspidal_left(tau, rho, x, r=1):
    """soc((rho|.|^x)^r x tau)."""
    x = half(x)
    for _ in range(r):
        tau = _socle_one_left(tau, rho, x)
    return tau


def _socle_one_left(tau, rho, x):
    base, k = gl_left_derivative_max(tau, rho, x)
    candidates = [tau + [Segment(rho, x, x)]]
    seen = set()
    for s in tau.segs:
        if s.rho == rho and s.x == x - 1 and s not in seen:
            seen.add(s)
            candidates.append(tau.without(s) + [Segment(rho, x, s.y)])
    hits = [c for c in candidates if gl_left_derivative_max(c, rho, x) == (base, k + 1)]
    assert len(hits) == 1, (tau, x, hits)
    return hits[0]


def gl_socle_cuspidal_right(tau, rho, x, r=1):
    """soc(tau x (rho|.|^x)^r)."""
    return gl_socle_cuspidal_left(tau.dual(), rho, -half(x), r).dual()


class NotReduced(ValueError):
    pass


def _two_step_derivative(tau, rho, second):
    _, k_second = gl_left_derivative_max(tau, rho, second)
    if k_second:
        raise NotReduced(f"{tau} is not left rho|.|^{second}-reduced")
    tau1, k0 = gl_left_derivative_max(tau, rho, 0)
    tau2, k1 = gl_left_derivative_max(tau1, rho, second)
    return gl_socle_cuspidal_left(tau2, rho, 0, k0 - k1), k1


def gl_left_Z01_derivative_max(tau, rho):
    """Highest left Z[0,1]-derivative of a left rho|.|^1-reduced tau."""
    return _two_step_derivative(tau, rho, HalfInt(1))


def gl_left_Delta01_derivative_max(tau, rho):
    """Highest left D[0,-1]-derivative of a left rho|.|^-1-reduced tau."""
    return _two_step_derivative(tau, rho, HalfInt(-1))


def _two_step_socle(tau, rho, second, r):
    if r == 0:
        return tau
    tau1, k0 = gl_left_derivative_max(tau, rho, 0)
    inner = gl_socle_cuspidal_left(tau1, rho, second, r)
    return gl_socle_cuspidal_left(inner, rho, 0, k0 + r)


def gl_socle_Z01_power(tau, rho, r):
    """soc(Z[0,1]^r x tau)."""
    return _two_step_socle(tau, rho, HalfInt(1), r)


def gl_socle_Delta01_power(tau, rho, r):
    """soc(D[0,-1]^r x tau)."""
    return _two_step_socle(tau, rho, HalfInt(-1), r)


class UnsupportedShape(ValueError):
    pass


def _classify_factor(factor):
    """Recognise (rho|.|^x)^r, D[0,-1]^r, Z[0,1]^r or a single segment rep."""
    segs = factor.segs
    if not segs:
        return ("one",)
    counts = Counter(segs)
    rhos = {s.rho for s in segs}
    if len(rhos) != 1:
        raise UnsupportedShape("factor mixes cuspidal labels")
    rho = next(iter(rhos))
    if len(counts) == 1:
        s, r = next(iter(counts.items()))
        if s.length == 1:
            return ("cusp", rho, s.x, r)
        if s.x == 0 and s.y == -1:
            return ("delta01", rho, r)
        if r == 1:
            return ("segment", s)
    if len(counts) == 2:
        (s1, r1), (s2, r2) = sorted(counts.items(), key=lambda kv: kv[0].x.twice)
        if r1 == r2 and (s1.x, s1.y, s2.x, s2.y) == (0, 0, 1, 1):
            return ("z01", rho, r1)
    # a single Zelevinsky segment: consecutive singletons
    xs = sorted(s.x.twice for s in segs)
    if all(s.length == 1 for s in segs) and all(b - a == 2 for a, b in zip(xs, xs[1:])):
        return ("zsegment", rho, HalfInt.from_twice(xs[0]), HalfInt.from_twice(xs[-1]))
    raise UnsupportedShape(f"unsupported factor {factor}")


def _ordered_insert(tau, new_segs):
    """soc(L(new) x tau) when nothing in tau with a smaller centre is linked to new."""
    for n in new_segs:
        for s in tau.segs:
            if (s.x + s.y) < (n.x + n.y) and segments_linked(s, n):
                raise UnsupportedShape(f"{segment_token(n)} is linked to {segment_token(s)} from the left")
    return tau + new_segs


def gl_socle_insert(tau, factor, side="left"):
    if side not in ("left", "right"):
        raise ValueError("side must be 'left' or 'right'")
    if side == "right":
        return gl_socle_insert(tau.dual(), factor.dual(), "left").dual()
    shape = _classify_factor(factor)
    kind = shape[0]
    if kind == "one":
        return tau
    if kind == "cusp":
        return gl_socle_cuspidal_left(tau, shape[1], shape[2], shape[3])
    if kind == "delta01":
        return gl_socle_Delta01_power(tau, shape[1], shape[2])
    if kind == "z01":
        return gl_socle_Z01_power(tau, shape[1], shape[2])
    if kind == "segment":
        s = shape[1]
        if s.length == 1:
            return gl_socle_cuspidal_left(tau, s.rho, s.x)
        return _ordered_insert(tau, [s])
    _, rho, lo, hi = shape
    return _zelevinsky_insert(tau, rho, lo, hi)


def _zelevinsky_insert(tau, rho, lo, hi):
    if lo == hi:
        return gl_socle_cuspidal_left(tau, rho, lo)
    if lo + 1 == hi and lo == 0:
        return gl_socle_Z01_power(tau, rho, 1)
    return _ordered_insert(tau, [Segment(rho, lo + i, lo + i) for i in range(int(hi - lo) + 1)])


def gl_product_irreducible(t1, t2):
    """Irreducibility of t1 x t2 for segment x segment and Speh x segment.

    Returns None when the shapes fall outside what is decided here.
    """
    if len(t1) == 1 and len(t2) == 1:
        return not segments_linked(t1.segs[0], t2.segs[0])
    if len(t2) == 1:
        t1, t2 = t2, t1
    if len(t1) != 1:
        return None
    delta = t1.segs[0]
    if all(not segments_linked(delta, s) for s in t2.segs):
        return True
    speh = _as_speh(t2)
    if speh is None:
        return None
    a, b1, s1 = speh
    if delta.length != a:
        return None
    # delta = D[B+s, -A+s] for the (a, b1+1) Speh, paired with u(a,b1)|.|^(-s-1/2)
    b = b1 + 1
    A = HalfInt.from_twice(a + b - 2)
    B = HalfInt.from_twice(a - b)
    s = delta.x - B
    # the linkage criterion below holds for s > 0 only
    if s1 != -s - HalfInt.from_twice(1) or s <= 0:
        return None
    reducible = (B + s > A - s - 1) and (-A + s > -B - s - 1) and (-A + s <= A - s)
    return not reducible


def _as_speh(tau):
    segs = tau.segs
    if not segs:
        return None
    a = segs[0].length
    rho = segs[0].rho
    xs = sorted(segs, key=lambda s: s.x.twice)
    for i, s in enumerate(xs):
        if s.rho != rho or s.length != a or s.x != xs[0].x + i:
            return None
    b = len(xs)
    B = HalfInt.from_twice(a - b)
    return a, b, xs[0].x - B
