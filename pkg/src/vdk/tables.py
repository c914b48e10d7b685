"""Prefix-substitution tables: the groups V_{d,k} in table form.

An element is a finite table {mu_1 -> nu_1, ..., mu_n -> nu_n} whose
domain words and range words each form a complete prefix code; it acts
on X_{d,k} by replacing the prefix mu_i with nu_i.  Tables are kept in
a canonical reduced form (maximally merged sibling families, sorted by
domain word) so equality of group elements is equality of tables.

For k = 1 the bare root names the whole space, which would serialize to
an empty string; canonical tables therefore stop merging one level
early and the k = 1 identity is {1->1, ..., d->d}.  Composition follows
(g compose h)(x) = g(h(x)).

Internally a word is packed into a single integer, (code << 6) | length,
where code is the mixed-radix value of (root-1, tail letters-1); the
merge-based composition then runs on machine integers, which is what
makes million-element Cayley ball enumeration feasible.
"""

from __future__ import annotations

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
    IncompleteDomain,
    IncompleteRange,
    MismatchedAlphabet,
    OverlappingDomain,
    OverlappingRange,
    TransportImpossible,
    VdkError,
)

_LEN_BITS = 6
_LEN_MASK = 63

_pow_cache: dict[int, list[int]] = {}


def _pows(d: int, upto: int = 64) -> list[int]:
    tab = _pow_cache.get(d)
    if tab is None or len(tab) <= upto:
        tab = [d**i for i in range(upto + 1)]
        _pow_cache[d] = tab
    return tab


def pack_word(w: Word) -> int:
    code = w.root - 1
    d = w.alphabet.d
    for t in w.tail:
        code = code * d + (t - 1)
    return (code << _LEN_BITS) | (len(w.tail) + 1)


def unpack_word(alphabet: Alphabet, packed: int) -> Word:
    length = packed & _LEN_MASK
    code = packed >> _LEN_BITS
    tail = []
    for _ in range(length - 1):
        code, r = divmod(code, alphabet.d)
        tail.append(r + 1)
    tail.reverse()
    return Word(alphabet, code + 1, tuple(tail))


def _sort_pairs(pairs, d):
    """Sort packed (dom, ran) pairs lexicographically by domain word."""
    pows = _pows(d)
    maxlen = max(p[0] & _LEN_MASK for p in pairs)
    return sorted(pairs, key=lambda p: ((p[0] >> _LEN_BITS) * pows[maxlen - (p[0] & _LEN_MASK)], p[0] & _LEN_MASK))


def _check_code(alphabet, packed_words, side, complete=True):
    """Prefix code check; raises Overlapping* and, when required, Incomplete*."""
    d, k = alphabet.d, alphabet.k
    pows = _pows(d, 64 + max(w & _LEN_MASK for w in packed_words))
    maxlen = max(w & _LEN_MASK for w in packed_words)
    keyed = sorted(
        ((w >> _LEN_BITS) * pows[maxlen - (w & _LEN_MASK)], w & _LEN_MASK, w)
        for w in packed_words
    )
    overlap_err = OverlappingDomain if side == "domain" else OverlappingRange
    for (k1, l1, w1), (k2, l2, w2) in zip(keyed, keyed[1:]):
        if l1 <= l2 and (w2 >> _LEN_BITS) // pows[l2 - l1] == (w1 >> _LEN_BITS):
            raise overlap_err(
                "%s words %s and %s overlap"
                % (side, unpack_word(alphabet, w1), unpack_word(alphabet, w2))
            )
    if not complete:
        return
    mass = sum(pows[maxlen - (w & _LEN_MASK)] for w in packed_words)
    if mass != k * pows[maxlen - 1]:
        err = IncompleteDomain if side == "domain" else IncompleteRange
        raise err(
            "%s words cover %d/%d leaves at depth %d"
            % (side, mass, k * pows[maxlen - 1], maxlen)
        )


def _code_complete(alphabet, packed_words) -> bool:
    """Whether an antichain of packed words covers the whole space."""
    if not packed_words:
        return False
    d, k = alphabet.d, alphabet.k
    maxlen = max(w & _LEN_MASK for w in packed_words)
    pows = _pows(d, maxlen + 1)
    mass = sum(pows[maxlen - (w & _LEN_MASK)] for w in packed_words)
    return mass == k * pows[maxlen - 1]


def _reduce_packed(pairs, d, k):
    """Merge aligned sibling families; pairs must be domain-sorted."""
    minlen = 3 if k == 1 else 2
    pairs = list(pairs)
    changed = True
    while changed:
        changed = False
        out = []
        i = 0
        n = len(pairs)
        while i < n:
            if i + d <= n:
                w, r = pairs[i]
                lw = w & _LEN_MASK
                lr = r & _LEN_MASK
                if lw >= minlen and lr >= minlen:
                    wc = w >> _LEN_BITS
                    rc = r >> _LEN_BITS
                    if wc % d == 0 and rc % d == 0:
                        for j in range(1, d):
                            w2, r2 = pairs[i + j]
                            if w2 != ((wc + j) << _LEN_BITS | lw) or r2 != (
                                (rc + j) << _LEN_BITS | lr
                            ):
                                break
                        else:
                            out.append(
                                (
                                    (wc // d) << _LEN_BITS | (lw - 1),
                                    (rc // d) << _LEN_BITS | (lr - 1),
                                )
                            )
                            i += d
                            changed = True
                            continue
            out.append(pairs[i])
            i += 1
        pairs = out
    return pairs


def _range_sorted(pairs, d):
    pows = _pows(d)
    maxlen = max(p[1] & _LEN_MASK for p in pairs)
    return sorted(pairs, key=lambda p: ((p[1] >> _LEN_BITS) * pows[maxlen - (p[1] & _LEN_MASK)], p[1] & _LEN_MASK))


def _compose_rs(gpairs, h_by_range, d, k):
    """Canonical packed table of g compose h.

    gpairs is domain-sorted, h_by_range is the same table as h but
    sorted by range word.  Walks the two complete prefix codes as a
    merge: both tile the space in lexicographic order, so at each step
    the current h-range cell and g-domain cell are comparable.
    """
    pows = _pows(d)
    out = []
    gi = 0
    gd, gr = gpairs[0]
    for hd, hr in h_by_range:
        lv = hr & _LEN_MASK
        cv = hr >> _LEN_BITS
        while True:
            la = gd & _LEN_MASK
            if la == lv:
                # identical cells; both end here
                out.append((hd, gr))
                gi += 1
                if gi < len(gpairs):
                    gd, gr = gpairs[gi]
                break
            if lv < la:
                # g-domain cell sits strictly inside the h-range cell; it is
                # the t-th leaf slot, and the h cell ends with the last slot
                delta = la - lv
                t = (gd >> _LEN_BITS) % pows[delta]
                out.append(
                    (
                        (((hd >> _LEN_BITS) * pows[delta] + t) << _LEN_BITS)
                        | ((hd & _LEN_MASK) + delta),
                        gr,
                    )
                )
                gi += 1
                if gi < len(gpairs):
                    gd, gr = gpairs[gi]
                if t == pows[delta] - 1 or gi >= len(gpairs):
                    break
                continue
            # h-range cell sits strictly inside the g-domain cell (t-th slot);
            # when it is the last slot the g cell ends here as well
            delta = lv - la
            t = cv % pows[delta]
            out.append(
                (
                    hd,
                    (((gr >> _LEN_BITS) * pows[delta] + t) << _LEN_BITS)
                    | ((gr & _LEN_MASK) + delta),
                )
            )
            if t == pows[delta] - 1:
                gi += 1
                if gi < len(gpairs):
                    gd, gr = gpairs[gi]
            break
    return tuple(_reduce_packed(_sort_pairs(out, d), d, k))


class TableElement:
    """Group element of V_{d,k} in canonical reduced table form."""

    __slots__ = ("alphabet", "packed", "_pairs", "_hash")

    def __init__(self, alphabet: Alphabet, packed: tuple[tuple[int, int], ...]):
        self.alphabet = alphabet
        self.packed = packed
        self._pairs = None
        self._hash = None

    @property
    def pairs(self) -> tuple[tuple[Word, Word], ...]:
        if self._pairs is None:
            a = self.alphabet
            self._pairs = tuple(
                (unpack_word(a, w), unpack_word(a, r)) for w, r in self.packed
            )
        return self._pairs

    @property
    def block_count(self) -> int:
        return len(self.packed)

    def __eq__(self, other):
        return (
            isinstance(other, TableElement)
            and self.alphabet == other.alphabet
            and self.packed == other.packed
        )

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.alphabet, self.packed))
        return self._hash

    def __mul__(self, other: TableElement) -> TableElement:
        return compose(self, other)

    def __invert__(self) -> TableElement:
        return inverse(self)

    def __pow__(self, n: int) -> TableElement:
        if n < 0:
            return inverse(self) ** (-n)
        acc = identity(self.alphabet)
        for _ in range(n):
            acc = compose(acc, self)
        return acc

    def is_identity(self) -> bool:
        return all(w == r for w, r in self.packed)

    def act_point(self, x: Point) -> Point:
        return act_point(self, x)

    def act_clopen(self, s: Clopen) -> Clopen:
        return act_clopen(self, s)

    def support(self) -> Clopen:
        return support(self)

    def __str__(self):
        return format_table(self)

    def __repr__(self):
        return "TableElement(%r)" % format_table(self)


def make_table(pairs) -> TableElement:
    """Validated canonical TableElement from (domain, range) word pairs."""
    pairs = list(pairs)
    if not pairs:
        raise VdkError("a table needs at least one pair")
    words = [w for p in pairs for w in p]
    alphabet = check_same_alphabet(*words)
    if alphabet.m != 1:
        raise ArityMismatch("tables are single-factor; use BoxTable for m > 1")
    packed = [(pack_word(mu), pack_word(nu)) for mu, nu in pairs]
    _check_code(alphabet, [p[0] for p in packed], "domain")
    _check_code(alphabet, [p[1] for p in packed], "range")
    if alphabet.k == 1 and len(packed) == 1:
        # the bare-root pair is the identity; expand one level so the
        # canonical form never contains the unprintable empty word
        packed = [
            (
                (i << _LEN_BITS) | 2,
                (i << _LEN_BITS) | 2,
            )
            for i in range(alphabet.d)
        ]
    packed = tuple(_reduce_packed(_sort_pairs(packed, alphabet.d), alphabet.d, alphabet.k))
    return TableElement(alphabet, packed)


def identity(alphabet: Alphabet) -> TableElement:
    if alphabet.k == 1:
        packed = tuple(((i << _LEN_BITS) | 2, (i << _LEN_BITS) | 2) for i in range(alphabet.d))
    else:
        packed = tuple(
            ((r << _LEN_BITS) | 1, (r << _LEN_BITS) | 1) for r in range(alphabet.k)
        )
    return TableElement(alphabet, packed)


def compose(g: TableElement, h: TableElement) -> TableElement:
    """The element g compose h, acting by x -> g(h(x))."""
    a = check_same_alphabet(g, h)
    packed = _compose_rs(g.packed, _range_sorted(h.packed, a.d), a.d, a.k)
    return TableElement(a, packed)


def inverse(g: TableElement) -> TableElement:
    a = g.alphabet
    swapped = [(r, w) for w, r in g.packed]
    packed = tuple(_reduce_packed(_sort_pairs(swapped, a.d), a.d, a.k))
    return TableElement(a, packed)


def reduce(g: TableElement) -> TableElement:
    """Canonical form; TableElements are already canonical, so identity."""
    return g


def equals(g: TableElement, h: TableElement) -> bool:
    return g == h


def act_point(g: TableElement, x: Point) -> Point:
    check_same_alphabet(g, x)
    for mu, nu in g.pairs:
        if x.letters(len(mu)) == mu.letters:
            fin, per = x.tail_stream(len(mu.tail))
            return point_normalize(
                Word(x.alphabet, nu.root, nu.tail + fin), per
            )
    raise VdkError("no domain block matches point %s" % x)  # unreachable for valid tables


def act_clopen(g: TableElement, s: Clopen) -> Clopen:
    check_same_alphabet(g, s)
    out = []
    for w in s.words:
        for mu, nu in g.pairs:
            if mu.is_prefix_of(w):
                out.append(Word(w.alphabet, nu.root, nu.tail + w.tail[len(mu.tail):]))
            elif w.is_prefix_of(mu):
                out.append(nu)
    return clopen_normalize(s.alphabet, out)


def support(g: TableElement) -> Clopen:
    """Union of domain cylinders whose block is not the literal identity.

    Points outside the returned clopen are fixed by g.
    """
    return clopen_normalize(
        g.alphabet, [mu for mu, nu in g.pairs if mu != nu]
    )


def probe_points(g: TableElement, h: TableElement) -> list[Point]:
    """Finitely many points guaranteed to separate distinct elements.

    For every cell of the common refinement of the two domain codes the
    list contains the points cell.c^inf for c = 1, 2; two canonical
    tables are equal iff they act identically on all of these.
    """
    check_same_alphabet(g, h)
    cells = set()
    for mu1, _ in g.pairs:
        for mu2, _ in h.pairs:
            if mu1.is_prefix_of(mu2):
                cells.add(mu2)
            elif mu2.is_prefix_of(mu1):
                cells.add(mu1)
    return [point_normalize(w, (c,)) for w in sorted(cells) for c in (1, 2)]


def transporter(nu1: Word, nu2: Word) -> TableElement:
    """An element carrying the cylinder of nu1 onto the cylinder of nu2.

    Deterministic: complements of the two cylinders are decomposed into
    canonical cylinder lists, the shorter list repeatedly splits its
    last cylinder into d children until lengths match (block counts are
    congruent mod d-1, so this terminates), and the lists are paired in
    lexicographic order.
    """
    a = check_same_alphabet(nu1, nu2)
    comp1 = list(clopen_normalize(a, [nu1]).complement().words)
    comp2 = list(clopen_normalize(a, [nu2]).complement().words)
    if bool(comp1) != bool(comp2):
        full = nu1 if not comp1 else nu2
        raise TransportImpossible(
            "cylinder of %s is the whole space but the other is proper" % full
        )
    while len(comp1) != len(comp2):
        shorter = comp1 if len(comp1) < len(comp2) else comp2
        last = shorter.pop()
        shorter.extend(last.child(i) for i in range(1, a.d + 1))
    pairs = [(nu1, nu2)] + list(zip(comp1, comp2))
    return make_table(pairs)


def embed_supported(g: TableElement, nu: Word) -> TableElement:
    """Copy of g in V_{d,k} supported on the cylinder of nu.

    g must live in V_{d,d} (k = d): its root letter r becomes the tail
    letter r appended to nu, so each word w maps to nu.(root w).(tail w).
    Off the cylinder the result is the identity.
    """
    base = g.alphabet
    target = nu.alphabet
    if base.d != target.d or base.k != base.d:
        raise ArityMismatch(
            "embedding needs g over (d=%d, k=%d) with k = d = %d"
            % (base.d, base.k, target.d)
        )

    def enc(w: Word) -> Word:
        return Word(target, nu.root, nu.tail + (w.root,) + w.tail)

    pairs = [(enc(mu), enc(rng)) for mu, rng in g.pairs]
    pairs.extend((c, c) for c in clopen_normalize(target, [nu]).complement().words)
    return make_table(pairs)


# ---------------------------------------------------------------------------
# parsing and formatting


def format_table(g: TableElement) -> str:
    return "{%s}" % ",".join(
        "%s->%s" % (format_word(mu), format_word(nu)) for mu, nu in g.pairs
    )


def parse_table(alphabet: Alphabet, text: str) -> TableElement:
    text = text.strip()
    if not (text.startswith("{") and text.endswith("}")):
        raise VdkError("table must look like {mu->nu,...}, got %r" % text)
    body = text[1:-1].strip()
    if not body:
        raise VdkError("a table needs at least one pair")
    pairs = []
    for part in body.split(","):
        if "->" not in part:
            raise VdkError("table pair %r must look like mu->nu" % part.strip())
        mu, _, nu = part.partition("->")
        pairs.append((parse_word(alphabet, mu), parse_word(alphabet, nu)))
    return make_table(pairs)
