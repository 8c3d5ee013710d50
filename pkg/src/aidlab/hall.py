"""Hall-basis construction of free nilpotent Lie algebras.

Hall words are binary trees over generators 1..r.  The fixed admissible
order is: shorter words first; generators by index; compound words
lexicographically by (left, right).  A word w = [u, v] is a Hall word when
u < v and either v is a generator or v = [v1, v2] with v1 <= u.  With this
convention f(3,2) has the basis x1, x2, x3, [x1,x2], [x1,x3], [x2,x3].

Brackets of Hall words are rewritten into the basis by antisymmetry plus
the Jacobi rule [u,[v1,v2]] = [[u,v1],v2] + [v1,[u,v2]], memoized, with all
words longer than the nilpotency class truncated to zero.
"""

from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

from .fields import ExactError, QQ
from .linalg import Subspace
from .liecore import BracketTable, LieAlgebra

DIM_CAP = 64


class HallWord:
    __slots__ = ("gen", "left", "right", "length", "_key")

    def __init__(self, gen: Optional[int] = None,
                 left: Optional["HallWord"] = None, right: Optional["HallWord"] = None):
        if gen is not None:
            self.gen = gen
            self.left = None
            self.right = None
            self.length = 1
            self._key = (1, (gen,))
        else:
            assert left is not None and right is not None
            self.gen = None
            self.left = left
            self.right = right
            self.length = left.length + right.length
            self._key = (self.length, (0,) + left._key[1] + right._key[1])

    def sort_key(self):
        # length-major total order; generator tuples compare before the
        # flattened (0, left, right) encodings of compound words of equal length
        return self._key

    def multidegree(self, r: int) -> Tuple[int, ...]:
        deg = [0] * r
        stack = [self]
        while stack:
            w = stack.pop()
            if w.gen is not None:
                deg[w.gen - 1] += 1
            else:
                stack.append(w.left)
                stack.append(w.right)
        return tuple(deg)

    def __lt__(self, other: "HallWord"):
        return self._key < other._key

    def __le__(self, other: "HallWord"):
        return self._key <= other._key

    def __eq__(self, other):
        return isinstance(other, HallWord) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __str__(self):
        if self.gen is not None:
            return "x%d" % self.gen
        return "[%s,%s]" % (self.left, self.right)

    __repr__ = __str__


def _is_hall(w: HallWord) -> bool:
    if w.gen is not None:
        return True
    u, v = w.left, w.right
    if not (u < v):
        return False
    if v.gen is not None:
        return True
    return v.left <= u


def hall_words(r: int, c: int) -> List[HallWord]:
    """All Hall words on r generators of length <= c, in basis order."""
    by_len: List[List[HallWord]] = [[]]
    by_len.append([HallWord(gen=i) for i in range(1, r + 1)])
    for length in range(2, c + 1):
        words = []
        for lu in range(1, length):
            lv = length - lu
            for u in by_len[lu]:
                for v in by_len[lv]:
                    w = HallWord(left=u, right=v)
                    if _is_hall(w):
                        words.append(w)
        words.sort(key=HallWord.sort_key)
        by_len.append(words)
    out = []
    for length in range(1, c + 1):
        out.extend(by_len[length])
    return out


class FreeNilpotent:
    """Free c-step nilpotent Lie algebra on r generators, over Q."""

    __slots__ = ("r", "c", "words", "index", "algebra")

    def __init__(self, r: int, c: int):
        if r < 2 or c < 1:
            raise ExactError("need r >= 2 generators and class c >= 1")
        words = hall_words(r, c)
        if len(words) > DIM_CAP:
            raise ExactError("free nilpotent dimension %d exceeds cap %d"
                             % (len(words), DIM_CAP))
        self.r = r
        self.c = c
        self.words = words
        self.index = {w: i for i, w in enumerate(words)}
        memo: Dict[Tuple[HallWord, HallWord], Dict[HallWord, int]] = {}

        def rewrite(u: HallWord, v: HallWord) -> Dict[HallWord, int]:
            if u.length + v.length > c:
                return {}
            if u == v:
                return {}
            if v < u:
                return {w: -k for w, k in rewrite(v, u).items()}
            key = (u, v)
            hit = memo.get(key)
            if hit is not None:
                return hit
            w = HallWord(left=u, right=v)
            if _is_hall(w):
                out = {w: 1}
            else:
                # v = [v1, v2] with v1 > u: Jacobi
                v1, v2 = v.left, v.right
                out: Dict[HallWord, int] = {}
                for t, k in rewrite(u, v1).items():
                    for t2, k2 in rewrite(t, v2).items():
                        out[t2] = out.get(t2, 0) + k * k2
                for t, k in rewrite(u, v2).items():
                    for t2, k2 in rewrite(v1, t).items():
                        out[t2] = out.get(t2, 0) + k * k2
                out = {t: k for t, k in out.items() if k}
            memo[key] = out
            return out

        table: BracketTable = {}
        n = len(words)
        for i in range(n):
            for j in range(i + 1, n):
                combo = rewrite(words[i], words[j])
                vec = {self.index[t]: Fraction(k) for t, k in combo.items()}
                if vec:
                    table[(i, j)] = vec
        self.algebra = LieAlgebra(QQ, n, table, name="free:%d,%d" % (r, c),
                                  meta={"family": "free", "r": r, "c": c,
                                        "hall_order": "length, then (left,right) lex"})

    def multidegree_component(self, degvec) -> Subspace:
        if len(degvec) != self.r:
            raise ExactError("multidegree length must equal the generator count")
        target = tuple(int(d) for d in degvec)
        vecs = []
        for i, w in enumerate(self.words):
            if w.multidegree(self.r) == target:
                e = [Fraction(0)] * len(self.words)
                e[i] = Fraction(1)
                vecs.append(e)
        return Subspace(QQ, len(self.words), vecs)

    def word_strings(self) -> List[str]:
        return [str(w) for w in self.words]


@lru_cache(maxsize=None)
def build_free_nilpotent(r: int, c: int) -> FreeNilpotent:
    return FreeNilpotent(r, c)


def witt_dimension(r: int, c: int) -> int:
    """Independent combinatorial oracle: sum over d <= c of necklace numbers."""

    def mobius(n: int) -> int:
        out, p, m = 1, 2, n
        while p * p <= m:
            if m % p == 0:
                m //= p
                if m % p == 0:
                    return 0
                out = -out
            p += 1
        if m > 1:
            out = -out
        return out

    total = 0
    for d in range(1, c + 1):
        s = 0
        for e in range(1, d + 1):
            if d % e == 0:
                s += mobius(e) * r ** (d // e)
        total += s // d
    return total
