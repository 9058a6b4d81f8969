"""Words in the surface group and canonical closed-curve representatives.

A word is a tuple of nonzero signed ints: ``2i - 1`` is ``a_i``, ``2i`` is
``b_i`` and a negative entry is the inverse letter. In text, letters are
tokens like ``a1`` or ``b2`` and capitals denote inverses: ``"a1 B2 A1"``.

Closed curves are unoriented, so a conjugacy class and its inverse class are
the same curve. Letters are ordered ``a1 < A1 < b1 < B1 < a2 < ...``.

Enumeration works in the free group on the ``2g`` generators. Two words that
only become conjugate through the surface relator are kept as separate
classes; :func:`dedup_by_fingerprint` can merge them numerically.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Iterator, List, Sequence, Tuple

from teichcurrents.errors import EmptyWordError, ProperPowerError

Word = Tuple[int, ...]

_TOKEN = re.compile(r"^([abAB])(\d+)$")


def letter_key(x: int) -> int:
    return 2 * (abs(x) - 1) + (1 if x < 0 else 0)


def word_key(w: Sequence[int]) -> Tuple[int, ...]:
    return tuple(letter_key(x) for x in w)


def inverse(w: Sequence[int]) -> Word:
    return tuple(-x for x in reversed(w))


def parse_letter(tok: str) -> int:
    m = _TOKEN.match(tok)
    if m is None:
        raise ValueError(f"bad letter token {tok!r}")
    kind, idx = m.group(1), int(m.group(2))
    if idx < 1:
        raise ValueError(f"bad letter token {tok!r}")
    x = 2 * idx - 1 if kind.lower() == "a" else 2 * idx
    return -x if kind.isupper() else x


def format_letter(x: int) -> str:
    idx = (abs(x) + 1) // 2
    kind = "a" if abs(x) % 2 == 1 else "b"
    if x < 0:
        kind = kind.upper()
    return f"{kind}{idx}"


def parse_word(text: str) -> Word:
    return tuple(parse_letter(t) for t in text.split())


def format_word(w: Sequence[int]) -> str:
    return " ".join(format_letter(x) for x in w)


def reduce(w: Sequence[int], cyclic: bool = False) -> Word:
    """Free reduction; with ``cyclic`` also strip inverse end letters."""
    out: List[int] = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    if cyclic:
        i, j = 0, len(out)
        while j - i >= 2 and out[i] == -out[j - 1]:
            i += 1
            j -= 1
        out = out[i:j]
    return tuple(out)


def rotations(w: Sequence[int]) -> Iterator[Word]:
    w = tuple(w)
    for i in range(len(w)):
        yield w[i:] + w[:i]


def is_proper_power(w: Sequence[int]) -> bool:
    w = tuple(w)
    n = len(w)
    for p in range(1, n // 2 + 1):
        if n % p == 0 and w[p:] + w[:p] == w:
            return True
    return False


def genus_of(w: Sequence[int]) -> int:
    """Smallest genus whose alphabet contains every letter of ``w``."""
    return max(((abs(x) + 1) // 2 for x in w), default=0)


@dataclass(frozen=True)
class ConjClass:
    """Canonical representative of an unoriented, primitive closed curve."""

    rep: Word

    @property
    def length(self) -> int:
        return len(self.rep)

    @property
    def sort_key(self):
        return (len(self.rep), word_key(self.rep))

    def __lt__(self, other: "ConjClass") -> bool:
        return self.sort_key < other.sort_key

    def __str__(self) -> str:
        return format_word(self.rep)


def _canonical_word(w: Word) -> Word:
    best = None
    best_key = None
    for cand in (w, inverse(w)):
        for r in rotations(cand):
            k = word_key(r)
            if best_key is None or k < best_key:
                best, best_key = r, k
    return best


def canonical_rep(w: Sequence[int]) -> ConjClass:
    """Canonical class of ``w``: least rotation of ``w`` or its inverse."""
    r = reduce(w, cyclic=True)
    if not r:
        raise EmptyWordError("word is trivial after cyclic reduction")
    if is_proper_power(r):
        raise ProperPowerError(f"{format_word(r)!r} is a proper power")
    return ConjClass(_canonical_word(r))


def curve(text: str) -> ConjClass:
    """Shorthand: the class of a word given as tokens."""
    return canonical_rep(parse_word(text))


def alphabet(genus: int) -> List[int]:
    letters = []
    for i in range(1, 2 * genus + 1):
        letters += [i, -i]
    return letters


def _is_canonical(w: Word, key: Tuple[int, ...]) -> bool:
    n = len(w)
    for i in range(1, n):
        if key[i:] + key[:i] < key:
            return False
    ik = word_key(inverse(w))
    for i in range(n):
        if ik[i:] + ik[:i] < key:
            return False
    return True


def enumerate_classes(genus: int, max_length: int) -> List[ConjClass]:
    """All primitive unoriented classes up to ``max_length``, sorted.

    Uses the fact that a canonical representative starts with its smallest
    letter and that this letter is a positive generator.
    """
    if genus < 1:
        raise ValueError("genus must be positive")
    letters = sorted(alphabet(genus), key=letter_key)
    out: List[ConjClass] = []
    for n in range(1, max_length + 1):
        for first in range(1, 2 * genus + 1):
            fk = letter_key(first)
            allowed = [x for x in letters if letter_key(x) >= fk]
            stack = [(first,)]
            while stack:
                w = stack.pop()
                if len(w) == n:
                    if n > 1 and w[-1] == -w[0]:
                        continue
                    key = word_key(w)
                    if _is_canonical(w, key) and not is_proper_power(w):
                        out.append(ConjClass(w))
                    continue
                last = w[-1]
                for x in reversed(allowed):
                    if x != -last:
                        stack.append(w + (x,))
    out.sort()
    return out


def shard_by_first_letter(classes: Iterable[ConjClass]) -> dict:
    """Group classes by the first letter of their representative."""
    shards: dict = {}
    for c in classes:
        shards.setdefault(c.rep[0], []).append(c)
    return shards


def dedup_by_fingerprint(classes: Sequence[ConjClass], references,
                         tol: float = 1e-8) -> List[ConjClass]:
    """Drop classes whose lengths match an earlier class on every reference.

    ``references`` is a list of holonomies; the fingerprint of a class is its
    vector of lengths on them. Classes are kept in input order.
    """
    from teichcurrents.spectrum import length_matrix

    classes = list(classes)
    if not classes:
        return []
    lm = length_matrix(list(references), classes).values
    fp = lm.T
    order = sorted(range(len(classes)), key=lambda j: tuple(fp[j]))
    drop = set()
    for pos in range(1, len(order)):
        j = order[pos]
        # scan back over the run of fingerprints equal in the first coordinate
        k = pos - 1
        while k >= 0 and abs(fp[order[k]][0] - fp[j][0]) <= tol:
            i = order[k]
            if i not in drop and max(abs(fp[i] - fp[j])) <= tol:
                drop.add(max(i, j))
                break
            k -= 1
    return [c for j, c in enumerate(classes) if j not in drop]


def read_curve_file(path) -> List[ConjClass]:
    """One class per line; ``#`` starts a comment."""
    out = []
    with open(path) as fh:
        for raw in fh:
            line = raw.split("#", 1)[0].strip()
            if line:
                out.append(canonical_rep(parse_word(line)))
    return out


def write_curve_file(path, classes: Iterable[ConjClass], header: str = "") -> None:
    with open(path, "w") as fh:
        if header:
            for h in header.splitlines():
                fh.write(f"# {h}\n")
        for c in classes:
            fh.write(format_word(c.rep) + "\n")
