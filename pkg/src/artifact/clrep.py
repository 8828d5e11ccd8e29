"""Langlands data for the classical group: tempered parameters, characters,
A-parameters and the pi(x^eps, ...) shorthand.

Bad-parity tempered pieces D[x,-x] x ... are kept inside the GL part as
zero-sum segments; everything in `phi` is of good parity.
"""

import re
from collections import Counter

from .core import (
    DEFAULT_RHO,
    GroupType,
    HalfInt,
    Segment,
    CuspidalLabel,
    SO_ODD,
    SP,
    dual_dimension_of,
    half,
    is_good_exponent,
    is_good_parity,
)
from .glrep import GLDatum, GLParseError, parse_segment_list, render_segments


def _label_key(pair):
    rho, d = pair
    return (rho.id, d)


class TemperedParam:
    """Multiset of rho x S_d, all of good parity."""

    __slots__ = ("summands",)

    def __init__(self, summands=()):
        summands = tuple(sorted(((rho, int(d)) for rho, d in summands), key=_label_key))
        for rho, d in summands:
            if d < 1:
                raise ValueError(f"S_{d}: dimension must be positive")
            if not is_good_parity(rho, d, 1):
                raise ValueError(f"{rho} x S_{d} is not of good parity")
        object.__setattr__(self, "summands", summands)

    def __setattr__(self, name, value):
        raise AttributeError("TemperedParam is immutable")

    def __eq__(self, other):
        return isinstance(other, TemperedParam) and self.summands == other.summands

    def __hash__(self):
        return hash(self.summands)

    def __iter__(self):
        return iter(self.summands)

    def __len__(self):
        return len(self.summands)

    def counts(self):
        return Counter(self.summands)

    def mult(self, rho, d):
        return sum(1 for r, e in self.summands if r == rho and e == d)

    def distinct(self):
        return sorted(set(self.summands), key=_label_key)

    def dimension(self):
        return sum(rho.dim * d for rho, d in self.summands)

    def __repr__(self):
        return "TemperedParam(" + ", ".join(f"{r.id}xS{d}" for r, d in self.summands) + ")"


class Character:
    """Signs on the distinct summands of a tempered parameter."""

    __slots__ = ("signs",)

    def __init__(self, signs=None):
        items = dict(signs or {})
        for key, sign in items.items():
            if sign not in (1, -1):
                raise ValueError(f"sign of {key} must be +1 or -1")
        object.__setattr__(self, "signs", tuple(sorted(items.items(), key=lambda kv: _label_key(kv[0]))))

    def __setattr__(self, name, value):
        raise AttributeError("Character is immutable")

    def __eq__(self, other):
        return isinstance(other, Character) and self.signs == other.signs

    def __hash__(self):
        return hash(self.signs)

    def as_dict(self):
        return dict(self.signs)

    def __getitem__(self, key):
        return dict(self.signs)[key]

    def __repr__(self):
        return "Character(" + ", ".join(f"{r.id}xS{d}:{'+' if s > 0 else '-'}" for (r, d), s in self.signs) + ")"


def validate_character(phi, eps):
    """Signs sit exactly on the distinct summands and multiply to +1."""
    signs = eps.as_dict()
    if set(signs) != set(phi.summands):
        return False
    product = 1
    for key in phi.summands:
        product *= signs[key]
    return product == 1


class ClValidationError(ValueError):
    pass


class ClDatum:
    """L(D_1, ..., D_r; pi(phi, eps)) with x_i + y_i < 0.

    A zero-sum segment D[x,-x] is allowed only on a bad-parity line, where
    it stands for the irreducible tempered piece D[x,-x] x (...).
    """

    __slots__ = ("gl", "phi", "eps")

    def __init__(self, gl=(), phi=(), eps=None):
        gl = gl if isinstance(gl, GLDatum) else GLDatum(gl)
        phi = phi if isinstance(phi, TemperedParam) else TemperedParam(phi)
        if eps is None:
            eps = Character({key: 1 for key in phi.summands})
        elif not isinstance(eps, Character):
            eps = Character(eps)
        for s in gl:
            total = s.x + s.y
            if total > 0 or (total == 0 and is_good_exponent(s.rho, s.x)):
                raise ClValidationError(f"segment {s} is not allowed in a Langlands datum")
        if not validate_character(phi, eps):
            raise ClValidationError(f"character {eps} is not valid on {phi}")
        object.__setattr__(self, "gl", gl)
        object.__setattr__(self, "phi", phi)
        object.__setattr__(self, "eps", eps)

    def __setattr__(self, name, value):
        raise AttributeError("ClDatum is immutable")

    def __eq__(self, other):
        return isinstance(other, ClDatum) and (self.gl, self.phi, self.eps) == (other.gl, other.phi, other.eps)

    def __hash__(self):
        return hash((self.gl, self.phi, self.eps))

    def __str__(self):
        return render_pi(self)

    def __repr__(self):
        return f"ClDatum({render_pi(self)})"

    # convenience accessors used by the derivative code
    def mult(self, rho, d):
        return self.phi.mult(rho, d)

    def sign(self, rho, d):
        return self.eps.as_dict().get((rho, d))

    def tempered_counts(self):
        return self.phi.counts()

    def dual_dimension(self):
        return 2 * self.gl.degree() + self.phi.dimension()

    def group(self, kind=None):
        dim = self.dual_dimension()
        if kind is None:
            kind = SP if dim % 2 else SO_ODD
        return GroupType.for_dual_dimension(kind, dim)

    def is_tempered(self):
        return all((s.x + s.y) == 0 for s in self.gl)

    def to_json(self):
        return {
            "gl": [{"rho": s.rho.to_json(), "x": str(s.x), "y": str(s.y)} for s in self.gl],
            "tempered": [
                {"rho": rho.to_json(), "x": str(HalfInt.from_twice(d - 1)), "sign": self.eps.as_dict()[(rho, d)]}
                for rho, d in self.phi
            ],
        }

    @classmethod
    def from_json(cls, obj):
        segs = [Segment(CuspidalLabel.from_json(g["rho"]), half(g["x"]), half(g["y"])) for g in obj.get("gl", [])]
        phi, signs = [], {}
        for t in obj.get("tempered", []):
            rho = CuspidalLabel.from_json(t.get("rho", {}))
            d = half(t["x"]).twice + 1
            phi.append((rho, d))
            if signs.setdefault((rho, d), t["sign"]) != t["sign"]:
                raise ClValidationError(f"equal summands {rho} x S_{d} carry different signs")
        return cls(segs, phi, signs)


def make_datum(gl_segs, counts, signs):
    """Build a ClDatum from a segment list, a Counter of (rho, d) and a sign dict.

    Signs of summands with multiplicity zero are dropped.
    """
    phi = []
    for key, m in counts.items():
        if m < 0:
            raise ClValidationError(f"negative multiplicity for {key}")
        phi.extend([key] * m)
    eps = {key: signs[key] for key in set(phi)}
    return ClDatum(gl_segs, phi, eps)


def tempered(*items, rho=DEFAULT_RHO):
    """tempered((0, -1), (1, -1), (2, 1)) is pi(0^-,1^-,2^+)."""
    phi, eps = [], {}
    for x, sign in items:
        d = half(x).twice + 1
        phi.append((rho, d))
        if eps.setdefault((rho, d), sign) != sign:
            raise ClValidationError("equal summands must carry equal signs")
    return phi, eps


def cl(gl_pairs=(), temp=(), rho=DEFAULT_RHO):
    """cl([(0,-1)], [(0,-1),(1,-1),(2,1)]) is L(D[0,-1]; pi(0^-,1^-,2^+))."""
    phi, eps = tempered(*temp, rho=rho)
    return ClDatum([Segment(rho, half(x), half(y)) for x, y in gl_pairs], phi, eps)


# ---------------------------------------------------------------------------
# text form


def _temp_token(rho, d, sign):
    x = HalfInt.from_twice(d - 1)
    head = str(x) if rho == DEFAULT_RHO else f"{rho.id}:{x}"
    return f"{head}^{'+' if sign > 0 else '-'}"


def render_pi(datum):
    signs = datum.eps.as_dict()
    temp = "pi(" + ",".join(_temp_token(rho, d, signs[(rho, d)]) for rho, d in datum.phi) + ")"
    if not datum.gl:
        return temp
    return "L(" + ",".join(render_segments(datum.gl.segs)) + "; " + temp + ")"


_TEMP_ITEM = re.compile(r"\s*(?:(?P<rid>\w+):)?(?P<x>-?\d+(?:/\d+)?)\^(?P<sign>[+-])\s*")


class PiParseError(ValueError):
    def __init__(self, msg, pos):
        super().__init__(f"{msg} at position {pos}")
        self.pos = pos


def _parse_tempered(text, offset, labels):
    body = text.strip()
    lead = len(text) - len(text.lstrip())
    if not (body.startswith("pi(") and body.endswith(")")):
        raise PiParseError("expected pi(...)", offset + lead)
    inner = body[3:-1]
    base = offset + lead + 3
    phi, eps = [], {}
    if not inner.strip():
        return phi, eps
    pos = 0
    for part in inner.split(","):
        m = _TEMP_ITEM.fullmatch(part)
        if not m:
            raise PiParseError(f"bad tempered entry {part.strip()!r}", base + pos)
        rid = m.group("rid")
        rho = labels.get(rid, CuspidalLabel(rid)) if rid else labels.get("rho", DEFAULT_RHO)
        x = HalfInt.parse(m.group("x"))
        if x < 0:
            raise PiParseError("tempered exponents are nonnegative", base + pos)
        d = x.twice + 1
        sign = 1 if m.group("sign") == "+" else -1
        if eps.setdefault((rho, d), sign) != sign:
            raise PiParseError("equal summands carry different signs", base + pos)
        phi.append((rho, d))
        pos += len(part) + 1
    return phi, eps


def parse_pi_notation(text, labels=None):
    """Parse 'L(D[0,-1]; pi(0^-,1^-,2^+))' or 'pi(0^+)' into a ClDatum."""
    labels = labels or {}
    stripped = text.strip()
    lead = len(text) - len(text.lstrip())
    try:
        if stripped.startswith("pi("):
            phi, eps = _parse_tempered(stripped, lead, labels)
            return ClDatum([], phi, eps)
        if not (stripped.startswith("L(") and stripped.endswith(")")):
            raise PiParseError("expected L(...) or pi(...)", lead)
        inner = stripped[2:-1]
        cut = inner.rfind(";")
        if cut < 0:
            raise PiParseError("missing ';' before the tempered part", lead + 2 + len(inner))
        segs = parse_segment_list(inner[:cut], labels, offset=lead + 2)
        phi, eps = _parse_tempered(inner[cut + 1:], lead + 3 + cut, labels)
        return ClDatum(segs, phi, eps)
    except GLParseError as err:
        raise PiParseError(str(err).rsplit(" at position", 1)[0], err.pos) from None


# ---------------------------------------------------------------------------
# A-parameters


class AParameter:
    """Multiset of rho x S_a x S_b together with the group it is a parameter for."""

    __slots__ = ("summands", "group")

    def __init__(self, summands, group=None, kind=None):
        summands = tuple(sorted(((rho, int(a), int(b)) for rho, a, b in summands), key=lambda t: (t[0].id, t[1], t[2])))
        for rho, a, b in summands:
            if a < 1 or b < 1:
                raise ValueError("a and b must be positive")
        dim = dual_dimension_of(summands)
        if group is None:
            if kind is None:
                kind = SP if dim % 2 else SO_ODD
            group = GroupType.for_dual_dimension(kind, dim)
        if group.dual_dimension != dim:
            raise ValueError(f"dimension {dim} does not match the dual group of {group}")
        object.__setattr__(self, "summands", summands)
        object.__setattr__(self, "group", group)

    def __setattr__(self, name, value):
        raise AttributeError("AParameter is immutable")

    def __eq__(self, other):
        return isinstance(other, AParameter) and (self.summands, self.group) == (other.summands, other.group)

    def __hash__(self):
        return hash((self.summands, self.group))

    def __iter__(self):
        return iter(self.summands)

    @property
    def good_parity(self):
        return all(is_good_parity(rho, a, b) for rho, a, b in self.summands)

    def __repr__(self):
        return "AParameter(" + " + ".join(f"{r.id}xS{a}xS{b}" for r, a, b in self.summands) + f"; {self.group})"


class MalformedParameter(ValueError):
    pass


def moeglin_split(psi):
    """psi = psi1 + psi0 + psi1^vee with psi0 of good parity."""
    good = [t for t in psi.summands if is_good_parity(t[0], t[1], t[2])]
    bad = Counter(t for t in psi.summands if not is_good_parity(t[0], t[1], t[2]))
    psi1 = []
    for t, m in sorted(bad.items(), key=lambda kv: (kv[0][0].id, kv[0][1], kv[0][2])):
        # every label is self-dual, so each bad summand must pair with a copy of itself
        if m % 2:
            raise MalformedParameter(f"bad-parity summand {t[0]} x S{t[1]} x S{t[2]} occurs an odd number of times")
        psi1.extend([t] * (m // 2))
    psi0 = AParameter(good, kind=psi.group.kind)
    return psi1, psi0
