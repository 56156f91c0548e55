"""Bass-Serre coordinates for one-edge splittings.

An amalgam ``A *_<c> B`` stores the two boundary words ``u_A``, ``u_B``;
an HNN extension stores the base alphabet and words ``u`` (source) and
``v`` (target) with defining relation ``t^-1 u t = v``.  Britton pinches
are therefore ``t^-1 u^k t -> v^k`` and ``t v^k t^-1 -> u^k``; an amalgam
syllable lying in its edge subgroup is pushed across and merged.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Union

from .words import Alphabet, Word, power_of
from .gog import GoGraph, GoVertex, GoEdge


class SyllableError(ValueError):
    """Malformed syllable form or missing dictionary entry."""


@dataclass(frozen=True)
class AmalgamSplitting:
    alphabet_a: Alphabet
    alphabet_b: Alphabet
    boundary_a: Word   # image of c in A
    boundary_b: Word   # image of c in B

    def __post_init__(self):
        if self.boundary_a.is_identity or self.boundary_b.is_identity:
            raise SyllableError("boundary words must be nontrivial")

    def to_json(self) -> dict:
        return {
            "kind": "amalgam",
            "alphabet_a": self.alphabet_a.to_json(),
            "alphabet_b": self.alphabet_b.to_json(),
            "boundary_a": self.boundary_a.to_json(),
            "boundary_b": self.boundary_b.to_json(),
        }


@dataclass(frozen=True)
class HnnSplitting:
    base: Alphabet
    source: Word   # u, in the base group
    target: Word   # v = theta(u), in the base group
    stable: str = "t"

    def __post_init__(self):
        if self.source.is_identity or self.target.is_identity:
            raise SyllableError("edge words must be nontrivial")

    def to_json(self) -> dict:
        return {
            "kind": "hnn",
            "base": self.base.to_json(),
            "source": self.source.to_json(),
            "target": self.target.to_json(),
            "stable": self.stable,
        }


Splitting = Union[AmalgamSplitting, HnnSplitting]


def splitting_from_json(data: dict) -> Splitting:
    if data["kind"] == "amalgam":
        aa = Alphabet.from_json(data["alphabet_a"])
        ab = Alphabet.from_json(data["alphabet_b"])
        return AmalgamSplitting(aa, ab,
                                Word.from_json(aa, data["boundary_a"]),
                                Word.from_json(ab, data["boundary_b"]))
    if data["kind"] == "hnn":
        base = Alphabet.from_json(data["base"])
        return HnnSplitting(base,
                            Word.from_json(base, data["source"]),
                            Word.from_json(base, data["target"]),
                            data.get("stable", "t"))
    raise SyllableError(f"unknown splitting kind {data['kind']!r}")


@dataclass(frozen=True)
class AmalgamForm:
    """Sequence of (side, word) syllables, side in {"A", "B"}."""

    syllables: tuple[tuple[str, Word], ...]

    def inverse(self) -> "AmalgamForm":
        return AmalgamForm(tuple((s, w.inverse()) for s, w in reversed(self.syllables)))

    def concat(self, other: "AmalgamForm") -> "AmalgamForm":
        return AmalgamForm(self.syllables + other.syllables)

    def to_json(self) -> list:
        return [[s, w.to_json()] for s, w in self.syllables]


@dataclass(frozen=True)
class HnnForm:
    """``head t^e1 w1 t^e2 w2 ...`` with each exponent +-1."""

    head: Word
    tail: tuple[tuple[int, Word], ...]

    @property
    def t_length(self) -> int:
        return len(self.tail)

    def inverse(self) -> "HnnForm":
        if not self.tail:
            return HnnForm(self.head.inverse(), ())
        words = [self.head] + [w for _, w in self.tail]
        eps = [e for e, _ in self.tail]
        new_head = words[-1].inverse()
        new_tail = []
        for i in range(len(eps) - 1, -1, -1):
            new_tail.append((-eps[i], words[i].inverse()))
        return HnnForm(new_head, tuple(new_tail))

    def concat(self, other: "HnnForm") -> "HnnForm":
        if not self.tail:
            return HnnForm(self.head * other.head, other.tail)
        last_e, last_w = self.tail[-1]
        return HnnForm(self.head,
                       self.tail[:-1] + ((last_e, last_w * other.head),) + other.tail)

    def to_json(self) -> dict:
        return {"head": self.head.to_json(),
                "tail": [[e, w.to_json()] for e, w in self.tail]}


SyllableForm = Union[AmalgamForm, HnnForm]


@dataclass(frozen=True)
class TreeMetrics:
    elliptic: bool
    translation_length: int

    def to_json(self) -> dict:
        return {"elliptic": self.elliptic,
                "translation_length": self.translation_length}


def identity_form(s: Splitting) -> SyllableForm:
    if isinstance(s, AmalgamSplitting):
        return AmalgamForm(())
    return HnnForm(s.base.identity(), ())


def to_splitting_coords(w: Word, s: Splitting,
                        dictionary: Mapping[str, SyllableForm]) -> SyllableForm:
    """Concatenate per-generator images; result is left unreduced."""
    out = identity_form(s)
    for l in w.letters:
        name = w.alphabet.names[abs(l) - 1]
        if name not in dictionary:
            raise SyllableError(f"no dictionary entry for generator {name!r}")
        img = dictionary[name]
        out = out.concat(img if l > 0 else img.inverse())
    return out


def _amalgam_pass(syllables: list[tuple[str, Word]], s: AmalgamSplitting) -> bool:
    """One merge / cross-over pass; True when something changed."""
    # merge adjacent same-side syllables and drop trivial ones
    i = 0
    changed = False
    while i < len(syllables):
        side, w = syllables[i]
        if w.is_identity and len(syllables) > 1:
            del syllables[i]
            changed = True
            continue
        if i + 1 < len(syllables) and syllables[i + 1][0] == side:
            syllables[i] = (side, w * syllables[i + 1][1])
            del syllables[i + 1]
            changed = True
            continue
        i += 1
    if changed:
        return True
    # cross an edge-subgroup syllable to the other side (only useful when
    # there is a neighbor to merge with, which keeps the pass terminating)
    if len(syllables) > 1:
        for i, (side, w) in enumerate(syllables):
            edge = s.boundary_a if side == "A" else s.boundary_b
            k = 0 if w.is_identity else power_of(w, edge)
            if k is not None:
                other = "B" if side == "A" else "A"
                other_edge = s.boundary_b if side == "A" else s.boundary_a
                syllables[i] = (other, other_edge ** k)
                return True
    return False


def _hnn_pinch_pass(head: Word, tail: list[tuple[int, Word]],
                    s: HnnSplitting) -> tuple[Word, bool]:
    """Remove one interior Britton pinch; returns (head, changed)."""
    for i in range(len(tail) - 1):
        e1, w1 = tail[i]
        e2, _ = tail[i + 1]
        if e1 == -e2:
            if e1 == -1:
                k = power_of(w1, s.source)
                across = s.target
            else:
                k = power_of(w1, s.target)
                across = s.source
            if k is not None:
                mid = across ** k * tail[i + 1][1]
                if i == 0:
                    head = head * mid
                    new_tail = tail[2:]
                else:
                    pe, pw = tail[i - 1]
                    tail[i - 1] = (pe, pw * mid)
                    new_tail = tail[: i] + tail[i + 2 :]
                tail[:] = new_tail
                return head, True
    return head, False


def syllable_reduce(f: SyllableForm, s: Splitting) -> SyllableForm:
    """Normal form: no interior edge-subgroup amalgam syllable, no HNN pinch."""
    if isinstance(s, AmalgamSplitting):
        assert isinstance(f, AmalgamForm)
        syl = list(f.syllables)
        while _amalgam_pass(syl, s):
            pass
        return AmalgamForm(tuple(syl))
    assert isinstance(f, HnnForm)
    head, tail = f.head, list(f.tail)
    changed = True
    while changed:
        head, changed = _hnn_pinch_pass(head, tail, s)
    return HnnForm(head, tuple(tail))


def _amalgam_metrics(f: AmalgamForm, s: AmalgamSplitting) -> TreeMetrics:
    syl = list(syllable_reduce(f, s).syllables)
    cap = len(syl) + 2
    for _ in range(cap):
        if len(syl) <= 1:
            break
        if syl[0][0] == syl[-1][0]:
            # conjugate the last syllable around to the front and re-reduce
            merged = (syl[0][0], syl[-1][1] * syl[0][1])
            syl = [merged] + syl[1:-1]
            while _amalgam_pass(syl, s):
                pass
            continue
        break
    if len(syl) <= 1:
        return TreeMetrics(True, 0)
    return TreeMetrics(False, len(syl))


def _hnn_metrics(f: HnnForm, s: HnnSplitting) -> TreeMetrics:
    red = syllable_reduce(f, s)
    if not red.tail:
        return TreeMetrics(True, 0)
    # fold head into the seam: conjugation does not change the metrics
    tail = list(red.tail)
    e_last, w_last = tail[-1]
    tail[-1] = (e_last, w_last * red.head)
    cap = len(tail) + 2
    for _ in range(cap):
        if len(tail) < 2:
            break
        e1, _ = tail[0]
        en, wn = tail[-1]
        if en != -e1:
            break
        if en == -1:
            k = power_of(wn, s.source)
            across = s.target
        else:
            k = power_of(wn, s.target)
            across = s.source
        if k is None:
            break
        if len(tail) == 2:
            # both stable letters cancel; the element is conjugate into the base
            return TreeMetrics(True, 0)
        # ... t^{e_{n-1}} w_{n-1} t^{en} wn | t^{e1} w1 ... -> merge across the seam
        _, w1 = tail[0]
        pe, pw = tail[-2]
        tail = tail[1:-2] + [(pe, pw * across ** k * w1)]
        # interior may now pinch again
        head = s.base.identity()
        changed = True
        while changed:
            head, changed = _hnn_pinch_pass(head, tail, s)
        if not tail:
            return TreeMetrics(True, 0)
        e_last, w_last = tail[-1]
        tail[-1] = (e_last, w_last * head)
    if not tail:
        return TreeMetrics(True, 0)
    return TreeMetrics(False, len(tail))


def tree_metrics(f: SyllableForm, s: Splitting) -> TreeMetrics:
    """Ellipticity and translation length on the Bass-Serre tree."""
    if isinstance(s, AmalgamSplitting):
        assert isinstance(f, AmalgamForm)
        return _amalgam_metrics(f, s)
    assert isinstance(f, HnnForm)
    return _hnn_metrics(f, s)


@dataclass(frozen=True)
class EmbeddedSplitting:
    """A splitting of an ambient one-relator group, with coordinate data.

    ``dictionary`` sends each ambient generator to its syllable form;
    ``flatten`` sends each coordinate generator (base letters plus the
    stable letter, for HNN) back to an ambient word.
    """

    splitting: Splitting
    ambient: Alphabet
    dictionary: Mapping[str, SyllableForm]
    flatten: Mapping[str, Word]
    edge_word: Word                 # edge-group generator as an ambient word
    descriptor: Optional[dict] = None

    def coords(self, w: Word) -> SyllableForm:
        return to_splitting_coords(w, self.splitting, self.dictionary)

    def metrics(self, w: Word) -> TreeMetrics:
        return tree_metrics(self.coords(w), self.splitting)

    def to_ambient(self, w: Word) -> Word:
        """Flatten a word over base (plus stable letter) to the ambient group."""
        out = self.ambient.identity()
        for l in w.letters:
            name = w.alphabet.names[abs(l) - 1]
            if name not in self.flatten:
                raise SyllableError(f"no ambient expression for {name!r}")
            img = self.flatten[name]
            out = out * (img if l > 0 else img.inverse())
        return out

    def to_json(self) -> dict:
        return {
            "splitting": self.splitting.to_json(),
            "ambient": self.ambient.to_json(),
            "dictionary": {
                name: form.to_json() for name, form in sorted(self.dictionary.items())
            },
            "edge_word": self.edge_word.to_json(),
            "descriptor": self.descriptor,
        }


@dataclass(frozen=True)
class Intersecting:
    witness: Word


@dataclass(frozen=True)
class CompatibleWitness:
    refinement: GoGraph


@dataclass(frozen=True)
class Inconclusive:
    reason: str = ""


IntersectionVerdict = Union[Intersecting, CompatibleWitness, Inconclusive]


def one_edge_graph(es: EmbeddedSplitting) -> GoGraph:
    """The splitting as a one-edge graph of groups (its trivial refinement)."""
    s = es.splitting
    if isinstance(s, AmalgamSplitting):
        return GoGraph(
            (GoVertex("A", s.alphabet_a), GoVertex("B", s.alphabet_b)),
            (GoEdge("e", "er", "B", s.boundary_b),
             GoEdge("er", "e", "A", s.boundary_a)),
            frozenset({"e", "er"}),
        )
    # loop relation t phi_e t^-1 = phi_ebar matches t^-1 u t = v via
    # phi_e = v, phi_ebar = u
    return GoGraph(
        (GoVertex("A", s.base),),
        (GoEdge("e", "er", "A", s.target), GoEdge("er", "e", "A", s.source)),
        frozenset(),
    )


def splittings_intersect(s1: EmbeddedSplitting, s2: EmbeddedSplitting,
                         refinement: Optional[GoGraph] = None) -> IntersectionVerdict:
    """Sound hyperbolicity test for intersection; refinements certify compatibility.

    The verdict ``Intersecting`` is definitive; ``Inconclusive`` is not a
    refutation (completeness would need core computations).
    """
    if s1.ambient != s2.ambient:
        raise SyllableError("splittings live over different ambient presentations")
    m = s2.metrics(s1.edge_word)
    if not m.elliptic:
        return Intersecting(s1.edge_word)
    m = s1.metrics(s2.edge_word)
    if not m.elliptic:
        return Intersecting(s2.edge_word)
    if refinement is not None:
        return CompatibleWitness(refinement)
    if s1 == s2:
        return CompatibleWitness(one_edge_graph(s1))
    return Inconclusive("no hyperbolic witness and no refinement supplied")
