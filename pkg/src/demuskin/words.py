"""Exact free-group arithmetic.

Words are sequences of signed generator letters over a fixed ordered
alphabet and are kept freely reduced at all times, so equality of group
elements is structural equality.  Letters are encoded as nonzero
integers: ``+(i+1)`` is the i-th generator, ``-(i+1)`` its inverse.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence


class WordError(ValueError):
    """Malformed word input: bad letter index, alphabet mismatch, syntax."""


_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Alphabet:
    """An ordered tuple of distinct generator labels."""

    names: tuple[str, ...]

    def __post_init__(self):
        if not self.names:
            raise WordError("alphabet needs at least one generator")
        if len(set(self.names)) != len(self.names):
            raise WordError("generator labels must be distinct")
        object.__setattr__(self, "names", tuple(self.names))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        try:
            return self.names.index(name)
        except ValueError:
            raise WordError(f"unknown generator {name!r}") from None

    def __contains__(self, name: str) -> bool:
        return name in self.names

    def gen(self, name: str, power: int = 1) -> "Word":
        """Single-generator word ``name^power``."""
        letter = self.index(name) + 1
        return Word(self, (letter if power >= 0 else -letter,) * abs(power))

    def identity(self) -> "Word":
        return Word(self, ())

    def word(self, text: str) -> "Word":
        """Parse whitespace-separated tokens ``name``, ``name^k``.

        >>> a = Alphabet(("x1", "y1"))
        >>> str(a.word("x1^3 y1 x1^-1 y1^-1"))
        'x1^3 y1 x1^-1 y1^-1'
        >>> str(a.word("x1 y1 y1^-1 x1^-1"))
        '1'
        """
        letters: list[int] = []
        for token in text.split():
            if token == "1":
                continue
            m = _TOKEN_RE.match(token)
            if m is None:
                raise WordError(f"bad token {token!r}")
            idx = self.index(m.group(1)) + 1
            k = int(m.group(2)) if m.group(2) is not None else 1
            letters.extend([idx if k > 0 else -idx] * abs(k))
        return Word(self, letters)

    def to_json(self) -> list[str]:
        return list(self.names)

    @classmethod
    def from_json(cls, data: Sequence[str]) -> "Alphabet":
        return cls(tuple(data))


def free_reduce(letters: Iterable[int]) -> tuple[int, ...]:
    """Freely reduce a letter sequence by stack cancellation."""
    out: list[int] = []
    for l in letters:
        if out and out[-1] == -l:
            out.pop()
        else:
            out.append(l)
    return tuple(out)


@dataclass(frozen=True)
class Word:
    """A freely reduced word; reduction happens on construction."""

    alphabet: Alphabet
    letters: tuple[int, ...]

    def __post_init__(self):
        rank = self.alphabet.rank
        for l in self.letters:
            if not isinstance(l, int) or l == 0 or abs(l) > rank:
                raise WordError(f"letter {l!r} out of range for rank {rank}")
        object.__setattr__(self, "letters", free_reduce(self.letters))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    @property
    def is_identity(self) -> bool:
        return not self.letters

    def __mul__(self, other: "Word") -> "Word":
        if other.alphabet != self.alphabet:
            raise WordError("alphabet mismatch")
        return Word(self.alphabet, self.letters + other.letters)

    def inverse(self) -> "Word":
        return Word(self.alphabet, tuple(-l for l in reversed(self.letters)))

    def __pow__(self, k: int) -> "Word":
        base = self if k >= 0 else self.inverse()
        out = self.alphabet.identity()
        for _ in range(abs(k)):
            out = out * base
        return out

    def __str__(self) -> str:
        if not self.letters:
            return "1"
        parts = []
        i = 0
        while i < len(self.letters):
            l = self.letters[i]
            j = i
            while j < len(self.letters) and self.letters[j] == l:
                j += 1
            name = self.alphabet.names[abs(l) - 1]
            k = (j - i) * (1 if l > 0 else -1)
            parts.append(name if k == 1 else f"{name}^{k}")
            i = j
        return " ".join(parts)

    def __repr__(self) -> str:
        return f"Word({self})"

    def to_json(self) -> list[list]:
        """Run-length pairs ``[["x1", 3], ["y1", -1], ...]``."""
        out: list[list] = []
        for l in self.letters:
            name = self.alphabet.names[abs(l) - 1]
            sign = 1 if l > 0 else -1
            if out and out[-1][0] == name and (out[-1][1] > 0) == (sign > 0):
                out[-1][1] += sign
            else:
                out.append([name, sign])
        return out

    @classmethod
    def from_json(cls, alphabet: Alphabet, data: Sequence[Sequence]) -> "Word":
        letters: list[int] = []
        for name, k in data:
            idx = alphabet.index(name) + 1
            letters.extend([idx if k > 0 else -idx] * abs(int(k)))
        return cls(alphabet, tuple(letters))


def multiply(u: Word, v: Word) -> Word:
    return u * v


def conjugate(u: Word, v: Word) -> Word:
    """``v u v^-1``."""
    return v * u * v.inverse()


def commutator(u: Word, v: Word) -> Word:
    """``u v u^-1 v^-1``.

    >>> a = Alphabet(("x", "y"))
    >>> str(commutator(a.gen("x"), a.gen("y")))
    'x y x^-1 y^-1'
    >>> commutator(a.gen("x"), a.gen("x")).is_identity
    True
    """
    return u * v * u.inverse() * v.inverse()


def cyclic_reduce(w: Word) -> tuple[Word, Word]:
    """Split ``w = conjugator * core * conjugator^-1`` with core cyclically reduced.

    >>> a = Alphabet(("x", "y"))
    >>> core, conj = cyclic_reduce(a.word("x y x^-1"))
    >>> str(core), str(conj)
    ('y', 'x')
    """
    letters = w.letters
    i, j = 0, len(letters)
    while j - i >= 2 and letters[i] == -letters[j - 1]:
        i += 1
        j -= 1
    return Word(w.alphabet, letters[i:j]), Word(w.alphabet, letters[:i])


def conjugate_in_free(u: Word, v: Word) -> bool:
    """True iff the cyclic reductions are cyclic rotations of one another."""
    if u.alphabet != v.alphabet:
        raise WordError("alphabet mismatch")
    cu, _ = cyclic_reduce(u)
    cv, _ = cyclic_reduce(v)
    if len(cu) != len(cv):
        return False
    if not cu:
        return True
    doubled = cu.letters + cu.letters
    n = len(cv.letters)
    return any(doubled[i : i + n] == cv.letters for i in range(n))


def power_of(w: Word, u: Word) -> Optional[int]:
    """Return k with ``w == reduce(u^k)`` if one exists, else None.

    ``u`` must be nontrivial; k may be negative or zero.
    """
    if u.is_identity:
        raise WordError("power_of needs a nontrivial base")
    if w.is_identity:
        return 0
    for sign in (1, -1):
        base = u if sign > 0 else u.inverse()
        acc = base
        k = 1
        while len(acc) <= len(w):
            if acc == w:
                return sign * k
            acc = acc * base
            k += 1
    return None


def primitive_root(w: Word) -> tuple[Word, int]:
    """Shortest v with ``w = v^m``, m maximal; requires w nontrivial."""
    if w.is_identity:
        raise WordError("identity has no primitive root")
    core, conj = cyclic_reduce(w)
    n = len(core)
    for dlen in range(1, n + 1):
        if n % dlen:
            continue
        piece = core.letters[:dlen]
        if piece * (n // dlen) == core.letters:
            root = conj * Word(w.alphabet, piece) * conj.inverse()
            return root, n // dlen
    raise AssertionError("unreachable: every word is its own root")


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n < 4:
        return True
    if n % 2 == 0:
        return False
    f = 3
    while f * f <= n:
        if n % f == 0:
            return False
        f += 2
    return True


def abelianize_mod_l(w: Word, l: int = 0) -> tuple[tuple[int, ...], bool]:
    """Exponent-sum vector (mod l when l > 0) and a primitivity flag.

    The flag is True when the gcd of the integer exponent sums is 1
    (l = 0) or coprime to the prime l (l > 0).
    """
    if l != 0 and not _is_prime(l):
        raise WordError(f"modulus {l} is neither 0 nor prime")
    sums = [0] * w.alphabet.rank
    for letter in w.letters:
        sums[abs(letter) - 1] += 1 if letter > 0 else -1
    g = 0
    for s in sums:
        g = math.gcd(g, abs(s))
    primitive = (g == 1) if l == 0 else (g % l != 0)
    vec = tuple(s % l for s in sums) if l > 0 else tuple(sums)
    return vec, primitive
