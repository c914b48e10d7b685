"""Compact open bisections of the groupoid G_{d,k}, and product boxes for mV.

A basic double cylinder (nu, mu) is the set of germs carrying mu-omega
to nu-omega; a bisection is a finite union of such cells with pairwise
disjoint domain cylinders and pairwise disjoint range cylinders.  Full
bisections (both families complete prefix codes) are exactly the table
elements, and to_table/from_table realize that isomorphism.

The mV part represents elements of the m-fold product groupoid of
G_{2,1} as tables of boxes: m-tuples of plain words over {1, 2}, acting
by coordinatewise prefix substitution.  Boxes have no root letter, and
the empty word is a legal coordinate.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .cantor import (
    Alphabet,
    Clopen,
    Point,
    Word,
    check_same_alphabet,
    clopen_normalize,
    format_word,
    parse_word,
    point_normalize,
)
from .errors import (
    ArityMismatch,
    IncompleteBoxes,
    NotFull,
    OverlappingBoxes,
    VdkError,
)
from .tables import (
    _LEN_BITS,
    _LEN_MASK,
    TableElement,
    _check_code,
    _code_complete,
    _reduce_packed,
    _sort_pairs,
    pack_word,
    unpack_word,
)


@dataclass(frozen=True, slots=True)
class DoubleCylinder:
    """Basic cell { (nu omega, |nu|-|mu|, mu omega) } of germs mu-omega -> nu-omega."""

    range_word: Word
    domain_word: Word

    @property
    def degree(self) -> int:
        return len(self.range_word) - len(self.domain_word)

    def __str__(self):
        return "%s<-%s" % (format_word(self.range_word), format_word(self.domain_word))


def germ_maps(c: DoubleCylinder) -> tuple[Clopen, Clopen, int]:
    """(source cylinder, range cylinder, degree) of a cell."""
    a = check_same_alphabet(c.range_word, c.domain_word)
    return (
        clopen_normalize(a, [c.domain_word]),
        clopen_normalize(a, [c.range_word]),
        c.degree,
    )


class Bisection:
    """Finite union of double cylinders, canonical and domain-sorted.

    Cells are kept packed as (domain, range) integer pairs in the same
    canonical form as tables, so full bisections and their tables agree
    cell for cell.  Build through make_bisection.
    """

    __slots__ = ("alphabet", "packed", "_cells")

    def __init__(self, alphabet: Alphabet, packed: tuple[tuple[int, int], ...]):
        self.alphabet = alphabet
        self.packed = packed
        self._cells = None

    @property
    def cells(self) -> tuple[DoubleCylinder, ...]:
        if self._cells is None:
            a = self.alphabet
            self._cells = tuple(
                DoubleCylinder(unpack_word(a, r), unpack_word(a, w))
                for w, r in self.packed
            )
        return self._cells

    def source(self) -> Clopen:
        return clopen_normalize(
            self.alphabet, [unpack_word(self.alphabet, w) for w, _ in self.packed]
        )

    def range(self) -> Clopen:
        return clopen_normalize(
            self.alphabet, [unpack_word(self.alphabet, r) for _, r in self.packed]
        )

    def __eq__(self, other):
        return (
            isinstance(other, Bisection)
            and self.alphabet == other.alphabet
            and self.packed == other.packed
        )

    def __hash__(self):
        return hash((self.alphabet, self.packed))

    def __mul__(self, other: Bisection) -> Bisection:
        return bisection_compose(self, other)

    def __invert__(self) -> Bisection:
        return bisection_inverse(self)

    def __str__(self):
        return format_bisection(self)

    def __repr__(self):
        return "Bisection(%r)" % format_bisection(self)


def make_bisection(cells, alphabet: Alphabet | None = None) -> Bisection:
    """Validated canonical Bisection from DoubleCylinders or (nu, mu) pairs.

    The empty bisection is allowed; pass the alphabet explicitly for it.
    """
    words = []
    for c in cells:
        if isinstance(c, DoubleCylinder):
            words.append((c.range_word, c.domain_word))
        else:
            nu, mu = c
            words.append((nu, mu))
    if not words:
        if alphabet is None:
            raise VdkError("empty bisection needs an explicit alphabet")
        return Bisection(alphabet, ())
    alphabet = check_same_alphabet(*[w for p in words for w in p])
    if alphabet.m != 1:
        raise ArityMismatch("bisections are single-factor; use BoxTable for m > 1")
    packed = sorted({(pack_word(mu), pack_word(nu)) for nu, mu in words})
    _check_code(alphabet, [p[0] for p in packed], "domain", complete=False)
    _check_code(alphabet, [p[1] for p in packed], "range", complete=False)
    if alphabet.k == 1 and len(packed) == 1 and packed[0] == (1, 1):
        # the identity over the whole space; expand one level, as tables do
        packed = [((i << _LEN_BITS) | 2, (i << _LEN_BITS) | 2) for i in range(alphabet.d)]
    packed = tuple(
        _reduce_packed(_sort_pairs(packed, alphabet.d), alphabet.d, alphabet.k)
    )
    return Bisection(alphabet, packed)


def is_full(u: Bisection) -> bool:
    """Both the domain words and the range words cover the whole space."""
    return _code_complete(u.alphabet, [p[0] for p in u.packed]) and _code_complete(
        u.alphabet, [p[1] for p in u.packed]
    )


def to_table(u: Bisection) -> TableElement:
    """The group element of a full bisection; NotFull otherwise."""
    if not is_full(u):
        raise NotFull("bisection with %d cells does not cover the space" % len(u.packed))
    return TableElement(u.alphabet, u.packed)


def from_table(g: TableElement) -> Bisection:
    """The full bisection of a table element (cells = table pairs)."""
    return Bisection(g.alphabet, g.packed)


def bisection_compose(u: Bisection, v: Bisection) -> Bisection:
    """All products of composable germs, u after v; degrees add cellwise."""
    a = check_same_alphabet(u, v)
    out = []
    for vd, vr in v.packed:
        lv = vr & _LEN_MASK
        cv = vr >> _LEN_BITS
        for ud, ur in u.packed:
            la = ud & _LEN_MASK
            ca = ud >> _LEN_BITS
            if la <= lv:
                # u-domain word is an ancestor of (or equals) v-range word
                delta = lv - la
                if cv // a.d**delta == ca:
                    t = cv % a.d**delta
                    out.append(
                        (
                            vd,
                            (((ur >> _LEN_BITS) * a.d**delta + t) << _LEN_BITS)
                            | ((ur & _LEN_MASK) + delta),
                        )
                    )
            else:
                delta = la - lv
                if ca // a.d**delta == cv:
                    t = ca % a.d**delta
                    out.append(
                        (
                            (((vd >> _LEN_BITS) * a.d**delta + t) << _LEN_BITS)
                            | ((vd & _LEN_MASK) + delta),
                            ur,
                        )
                    )
    if not out:
        return Bisection(a, ())
    packed = tuple(_reduce_packed(_sort_pairs(out, a.d), a.d, a.k))
    return Bisection(a, packed)


def bisection_inverse(u: Bisection) -> Bisection:
    """Cellwise inverse: swap domain and range, negate degrees."""
    if not u.packed:
        return u
    swapped = [(r, w) for w, r in u.packed]
    packed = tuple(_reduce_packed(_sort_pairs(swapped, u.alphabet.d), u.alphabet.d, u.alphabet.k))
    return Bisection(u.alphabet, packed)


def bisection_act(u: Bisection, x: Point) -> Point:
    """u.x = r((s restricted to u)^{-1}(x)); x must lie in the source."""
    check_same_alphabet(u, x)
    a = u.alphabet
    for w, r in u.packed:
        mu = unpack_word(a, w)
        if x.letters(len(mu)) == mu.letters:
            nu = unpack_word(a, r)
            fin, per = x.tail_stream(len(mu.tail))
            return point_normalize(Word(a, nu.root, nu.tail + fin), per)
    raise VdkError("point %s is outside the source of the bisection" % x)


# ---------------------------------------------------------------------------
# parsing and formatting


def format_bisection(u: Bisection) -> str:
    return "{%s}" % ",".join(str(c) for c in u.cells)


def parse_bisection(alphabet: Alphabet, text: str) -> Bisection:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise VdkError("bisection must look like {nu<-mu,...}, got %r" % text)
    body = text[1:-1].strip()
    if not body:
        return Bisection(alphabet, ())
    cells = []
    for part in body.split(","):
        if "<-" not in part:
            raise VdkError("bisection cell %r must look like nu<-mu" % part.strip())
        nu, _, mu = part.partition("<-")
        cells.append((parse_word(alphabet, nu), parse_word(alphabet, mu)))
    return make_bisection(cells, alphabet)


def bisection_to_json(u: Bisection) -> list[dict]:
    return [
        {
            "range": format_word(c.range_word),
            "domain": format_word(c.domain_word),
            "degree": c.degree,
        }
        for c in u.cells
    ]


# ---------------------------------------------------------------------------
# Brin-Thompson mV: tables of boxes over the m-fold product of {1,2}^N

Box = tuple[tuple[int, ...], ...]


def _box_text(box: Box) -> str:
    return "(%s)" % ",".join("".join(map(str, w)) or "e" for w in box)


def _check_box(box, m: int) -> Box:
    box = tuple(tuple(w) for w in box)
    if len(box) != m:
        raise VdkError("box %s has %d coordinates, expected %d" % (_box_text(box), len(box), m))
    for w in box:
        if any(t not in (1, 2) for t in w):
            raise VdkError("box coordinate letters must be 1 or 2, got %s" % _box_text(box))
    return box


def _boxes_overlap(b1: Box, b2: Box) -> bool:
    """Boxes meet iff every coordinate pair is prefix-comparable."""
    for w1, w2 in zip(b1, b2):
        n = min(len(w1), len(w2))
        if w1[:n] != w2[:n]:
            return False
    return True


def _check_box_side(boxes: list[Box], side: str) -> None:
    for i in range(len(boxes)):
        for j in range(i + 1, len(boxes)):
            if _boxes_overlap(boxes[i], boxes[j]):
                raise OverlappingBoxes(
                    "%s boxes %s and %s overlap"
                    % (side, _box_text(boxes[i]), _box_text(boxes[j]))
                )
    mass = sum(
        Fraction(1, 2 ** sum(len(w) for w in box)) for box in boxes
    )
    if mass != 1:
        raise IncompleteBoxes("%s boxes cover mass %s of the product space" % (side, mass))


def _mv_reduce(pairs: list[tuple[Box, Box]], m: int) -> list[tuple[Box, Box]]:
    """Greedy coordinatewise merge, fixed coordinate order, to fixpoint."""
    pairs = sorted(pairs)
    changed = True
    while changed:
        changed = False
        for c in range(m):
            buckets: dict = {}
            for A, B in pairs:
                if A[c] and B[c] and A[c][-1] == B[c][-1]:
                    key = (A[:c], A[c + 1 :], B[:c], B[c + 1 :], A[c][:-1], B[c][:-1])
                    buckets.setdefault(key, {})[A[c][-1]] = (A, B)
            for key, members in buckets.items():
                if len(members) == 2:
                    a1, a2, b1, b2, wa, wb = key
                    merged = (
                        a1 + (wa,) + a2,
                        b1 + (wb,) + b2,
                    )
                    pairs = [p for p in pairs if p not in members.values()]
                    pairs.append(merged)
                    pairs.sort()
                    changed = True
                    break
            if changed:
                break
    return pairs


class BoxTable:
    """Element of mV: a bijection between two partitions of ([2]^N)^m into boxes."""

    __slots__ = ("m", "pairs")

    def __init__(self, m: int, pairs: tuple[tuple[Box, Box], ...]):
        self.m = m
        self.pairs = pairs

    def __eq__(self, other):
        return (
            isinstance(other, BoxTable) and self.m == other.m and self.pairs == other.pairs
        )

    def __hash__(self):
        return hash((self.m, self.pairs))

    def __mul__(self, other: BoxTable) -> BoxTable:
        return mv_compose(self, other)

    def __invert__(self) -> BoxTable:
        return mv_inverse(self)

    def is_identity(self) -> bool:
        return all(a == b for a, b in self.pairs)

    def __str__(self):
        return "{%s}" % ",".join(
            "%s->%s" % (_box_text(a), _box_text(b)) for a, b in self.pairs
        )

    def __repr__(self):
        return "BoxTable(%r)" % str(self)


def mv_make(pairs, m: int) -> BoxTable:
    """Validated canonical BoxTable from (domain box, range box) pairs."""
    if m < 1:
        raise VdkError("factor count m must be at least 1, got %d" % m)
    checked = [(_check_box(a, m), _check_box(b, m)) for a, b in pairs]
    if not checked:
        raise VdkError("a box table needs at least one pair")
    _check_box_side([a for a, _ in checked], "domain")
    _check_box_side([b for _, b in checked], "range")
    return BoxTable(m, tuple(_mv_reduce(checked, m)))


def mv_identity(m: int) -> BoxTable:
    empty = tuple(() for _ in range(m))
    return BoxTable(m, (((empty), (empty)),))


def mv_compose(g: BoxTable, h: BoxTable) -> BoxTable:
    """The element g compose h, acting by xs -> g(h(xs))."""
    if g.m != h.m:
        raise ArityMismatch("factor counts differ: %d vs %d" % (g.m, h.m))
    out = []
    for A, B in h.pairs:
        for C, D in g.pairs:
            dom, ran = [], []
            for w_b, w_c, w_a, w_d in zip(B, C, A, D):
                n = min(len(w_b), len(w_c))
                if w_b[:n] != w_c[:n]:
                    dom = None
                    break
                if len(w_c) <= len(w_b):
                    dom.append(w_a)
                    ran.append(w_d + w_b[len(w_c):])
                else:
                    dom.append(w_a + w_c[len(w_b):])
                    ran.append(w_d)
            if dom is not None:
                out.append((tuple(dom), tuple(ran)))
    return mv_make(out, g.m)


def mv_inverse(g: BoxTable) -> BoxTable:
    return BoxTable(g.m, tuple(_mv_reduce([(b, a) for a, b in g.pairs], g.m)))


_COORD_ALPHABET = Alphabet(2, 1)


def mv_act(g: BoxTable, xs) -> tuple[Point, ...]:
    """Apply the unique matching domain box coordinatewise."""
    xs = tuple(xs)
    if len(xs) != g.m:
        raise ArityMismatch("expected %d points, got %d" % (g.m, len(xs)))
    for x in xs:
        if (x.alphabet.d, x.alphabet.k) != (2, 1):
            raise ArityMismatch("mv points live over d=2, k=1 coordinates")
    for A, B in g.pairs:
        if all(
            x.letters(len(w) + 1)[1:] == w for x, w in zip(xs, A)
        ):
            ys = []
            for x, w, v in zip(xs, A, B):
                fin, per = x.tail_stream(len(w))
                ys.append(point_normalize(Word(x.alphabet, 1, v + fin), per))
            return tuple(ys)
    raise VdkError("no domain box matches the point tuple")  # unreachable when complete


def mv_embed_factor(g: TableElement, m: int, coord: int) -> BoxTable:
    """Copy of a V_{2,1} table acting on one coordinate of the product."""
    a = g.alphabet
    if (a.d, a.k) != (2, 1):
        raise ArityMismatch("only V_{2,1} tables embed coordinatewise")
    if not 0 <= coord < m:
        raise VdkError("coordinate %d out of range for m=%d" % (coord, m))
    pairs = []
    for mu, nu in g.pairs:
        dom = tuple(mu.tail if i == coord else () for i in range(m))
        ran = tuple(nu.tail if i == coord else () for i in range(m))
        pairs.append((dom, ran))
    return mv_make(pairs, m)


def mv_to_json(g: BoxTable) -> dict:
    return {
        "m": g.m,
        "pairs": [
            [
                ["".join(map(str, w)) for w in a],
                ["".join(map(str, w)) for w in b],
            ]
            for a, b in g.pairs
        ],
    }


def mv_from_json(data: dict) -> BoxTable:
    m = int(data["m"])
    pairs = []
    for a, b in data["pairs"]:
        pairs.append(
            (
                tuple(tuple(int(t) for t in w) for w in a),
                tuple(tuple(int(t) for t in w) for w in b),
            )
        )
    return mv_make(pairs, m)
