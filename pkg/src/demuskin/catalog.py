"""The concrete catalog: one-relator presentations and their cyclic splittings.

For parameters (p, d, r, r') the group has generators x1, y1, ..., xd, yd
and single relator ``w = x1^q [x1,y1]...[xd,yd] yd^(-p^r')`` with q = p^r;
r = inf drops the leading power and r' = inf the trailing one.  The
catalog constructs the distinguished amalgam and HNN splittings of these
groups, the companion splittings used in the intersection arguments,
Dehn-twist endomorphisms, the partial-conjugation endomorphism on the
arithmetic generator set, and Whitehead minimization.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Sequence, Union

from .words import (Alphabet, Word, abelianize_mod_l, commutator,
                    conjugate_in_free, cyclic_reduce, _is_prime)
from .gog import (GoEdge, GoGraph, GoVertex, Presentation, apply_endo)
from .normal_forms import (AmalgamForm, AmalgamSplitting, EmbeddedSplitting,
                           HnnForm, HnnSplitting, SyllableForm)

INF = math.inf


class ParamError(ValueError):
    """Invalid family parameters or descriptor."""


def _level(value) -> Union[int, float]:
    if value in ("inf", None) or value == INF:
        return INF
    v = int(value)
    if v < 1:
        raise ParamError("levels must be positive integers or inf")
    return v


def _level_json(value) -> Union[int, str]:
    return "inf" if value == INF else int(value)


@dataclass(frozen=True)
class DemuskinParams:
    """p odd prime, 2d generators, orientation level r, deformation level r'."""

    p: int
    d: int
    r: Union[int, float]
    rprime: Union[int, float]

    def __post_init__(self):
        if not _is_prime(self.p) or self.p < 3:
            raise ParamError(f"p must be an odd prime, got {self.p}")
        if self.d < 1:
            raise ParamError("d must be at least 1")
        object.__setattr__(self, "r", _level(self.r))
        object.__setattr__(self, "rprime", _level(self.rprime))
        if self.rprime < self.r:
            raise ParamError("rprime must be at least r")

    @property
    def q(self) -> int:
        if self.r == INF:
            raise ParamError("q is undefined for r = inf")
        return self.p ** int(self.r)

    def alphabet(self) -> Alphabet:
        names = []
        for i in range(1, self.d + 1):
            names += [f"x{i}", f"y{i}"]
        return Alphabet(tuple(names))

    def to_json(self) -> dict:
        return {"p": self.p, "d": self.d,
                "r": _level_json(self.r), "rprime": _level_json(self.rprime)}

    @classmethod
    def from_json(cls, data: dict) -> "DemuskinParams":
        return cls(data["p"], data["d"], data["r"], data["rprime"])


@dataclass(frozen=True)
class SplitDescriptor:
    """Which catalog splitting: an amalgam at 1 <= n < d, or an HNN form."""

    kind: str                       # "amalg" | "hnn"
    n: Optional[int] = None
    form: str = "theorem"           # HNN only: "theorem" | "definition"

    def __post_init__(self):
        if self.kind not in ("amalg", "hnn"):
            raise ParamError(f"unknown splitting kind {self.kind!r}")
        if self.kind == "amalg" and self.n is None:
            raise ParamError("amalgam descriptor needs n")
        if self.form not in ("theorem", "definition"):
            raise ParamError(f"unknown HNN form {self.form!r}")

    def to_json(self) -> dict:
        if self.kind == "amalg":
            return {"kind": {"amalg": self.n}}
        return {"kind": "hnn", "form": self.form}

    @classmethod
    def from_json(cls, data: dict) -> "SplitDescriptor":
        kind = data["kind"]
        if kind == "hnn":
            return cls("hnn", form=data.get("form", "theorem"))
        if isinstance(kind, dict) and "amalg" in kind:
            return cls("amalg", n=int(kind["amalg"]))
        raise ParamError(f"bad descriptor {data!r}")


def _pair_commutators(alpha: Alphabet, indices: Iterable[int], flipped=False) -> Word:
    w = alpha.identity()
    for i in indices:
        x, y = alpha.gen(f"x{i}"), alpha.gen(f"y{i}")
        w = w * (commutator(y, x) if flipped else commutator(x, y))
    return w


def relator(params: DemuskinParams) -> Word:
    alpha = params.alphabet()
    w = alpha.identity()
    if params.r != INF:
        w = w * alpha.gen("x1", params.q)
    w = w * _pair_commutators(alpha, range(1, params.d + 1))
    if params.rprime != INF:
        w = w * alpha.gen(f"y{params.d}", -(params.p ** int(params.rprime)))
    return w


def demuskin_presentation(params: DemuskinParams) -> Presentation:
    """One-relator presentation on x1, y1, ..., xd, yd."""
    return Presentation(params.alphabet(), (relator(params),))


def boundary_a_word(params: DemuskinParams, n: int, alpha: Alphabet) -> Word:
    w = alpha.identity()
    if params.r != INF:
        w = w * alpha.gen("x1", params.q)
    return w * _pair_commutators(alpha, range(1, n + 1))


def boundary_b_word(params: DemuskinParams, n: int, alpha: Alphabet) -> Word:
    w = alpha.identity()
    if params.rprime != INF:
        w = w * alpha.gen(f"y{params.d}", params.p ** int(params.rprime))
    return w * _pair_commutators(alpha, range(params.d, n, -1), flipped=True)


def split_amalg(params: DemuskinParams, n: int) -> EmbeddedSplitting:
    """Amalgam over <c> with c -> x1^q[x1,y1]..[xn,yn] on one side and
    c -> yd^(p^r')[yd,xd]..[y_{n+1},x_{n+1}] on the other."""
    if not 1 <= n < params.d:
        raise ParamError(f"amalgam index n={n} out of range for d={params.d}")
    ambient = params.alphabet()
    names_a = tuple(f"{g}{i}" for i in range(1, n + 1) for g in ("x", "y"))
    names_b = tuple(f"{g}{i}" for i in range(n + 1, params.d + 1) for g in ("x", "y"))
    alpha_a, alpha_b = Alphabet(names_a), Alphabet(names_b)
    u_a = boundary_a_word(params, n, alpha_a)
    u_b = boundary_b_word(params, n, alpha_b)
    splitting = AmalgamSplitting(alpha_a, alpha_b, u_a, u_b)
    dictionary: dict[str, SyllableForm] = {}
    flatten: dict[str, Word] = {}
    for name in ambient.names:
        if name in alpha_a:
            dictionary[name] = AmalgamForm((("A", alpha_a.gen(name)),))
        else:
            dictionary[name] = AmalgamForm((("B", alpha_b.gen(name)),))
        flatten[name] = ambient.gen(name)
    edge = boundary_a_word(params, n, ambient)
    return EmbeddedSplitting(splitting, ambient, dictionary, flatten, edge,
                             descriptor={"params": params.to_json(),
                                         "kind": {"amalg": n}})


def _hnn_embedded(params: DemuskinParams, base_names: tuple[str, ...],
                  u: Word, v: Word, omitted: str, extra_flatten: dict[str, Word],
                  extra_dict: dict[str, SyllableForm], descriptor: dict,
                  edge_ambient: Word) -> EmbeddedSplitting:
    ambient = params.alphabet()
    splitting = HnnSplitting(u.alphabet, u, v)
    base = u.alphabet
    dictionary: dict[str, SyllableForm] = {}
    flatten: dict[str, Word] = dict(extra_flatten)
    for name in ambient.names:
        if name in base:
            dictionary[name] = HnnForm(base.gen(name), ())
            flatten.setdefault(name, ambient.gen(name))
    # the omitted ambient generator plays the stable letter inverted:
    # t^-1 u t = v holds with t = omitted^-1
    dictionary[omitted] = HnnForm(base.identity(), ((-1, base.identity()),))
    flatten[splitting.stable] = ambient.gen(omitted).inverse()
    dictionary.update(extra_dict)
    return EmbeddedSplitting(splitting, ambient, dictionary, flatten,
                             edge_ambient, descriptor=descriptor)


def split_hnn(params: DemuskinParams, form: str = "theorem") -> EmbeddedSplitting:
    """The HNN splittings; built over the r' = inf family member only."""
    if params.rprime != INF:
        raise ParamError("HNN catalog splittings require rprime = inf")
    if params.d < 1:
        raise ParamError("HNN splitting needs d >= 1")
    ambient = params.alphabet()
    d = params.d
    prefix = ambient.identity()
    if params.r != INF:
        prefix = prefix * ambient.gen("x1", params.q)
    prefix = prefix * _pair_commutators(ambient, range(1, d))
    if form == "theorem":
        base_names = tuple(n for n in ambient.names if n != f"y{d}")
        base = Alphabet(base_names)
        u = base.gen(f"x{d}")
        v = _reletter(base, prefix) * base.gen(f"x{d}")
        return _hnn_embedded(params, base_names, u, v, omitted=f"y{d}",
                             extra_flatten={}, extra_dict={},
                             descriptor={"params": params.to_json(),
                                         "kind": "hnn", "form": "theorem"},
                             edge_ambient=ambient.gen(f"x{d}"))
    if form == "definition":
        base_names = tuple(n for n in ambient.names if n != f"x{d}")
        base = Alphabet(base_names)
        u = base.gen(f"y{d}")
        v = _reletter(base, prefix).inverse() * base.gen(f"y{d}")
        return _hnn_embedded(params, base_names, u, v, omitted=f"x{d}",
                             extra_flatten={}, extra_dict={},
                             descriptor={"params": params.to_json(),
                                         "kind": "hnn", "form": "definition"},
                             edge_ambient=ambient.gen(f"y{d}"))
    raise ParamError(f"unknown HNN form {form!r}")


def _reletter(alpha: Alphabet, w: Word) -> Word:
    letters = []
    for l in w.letters:
        name = w.alphabet.names[abs(l) - 1]
        idx = alpha.index(name) + 1
        letters.append(idx if l > 0 else -idx)
    return Word(alpha, tuple(letters))


def theorem_beta(params: DemuskinParams, descriptor: SplitDescriptor) -> EmbeddedSplitting:
    """Companion splitting exhibiting intersection with the descriptor's splitting.

    For the HNN descriptor this is the splitting whose base omits xd; for
    the amalgam at n it is the HNN splitting on the 2d-1 letters obtained
    by trading y_n and x_{n+1} for b = y_n^-1 x_{n+1}, with stable letter
    corresponding to x_{n+1}.
    """
    if descriptor.kind == "hnn":
        return split_hnn(params, form="definition")
    n, d = descriptor.n, params.d
    if not 1 <= n < d:
        raise ParamError(f"amalgam index n={n} out of range for d={d}")
    ambient = params.alphabet()
    base_names = tuple(nm for nm in ambient.names
                       if nm not in (f"y{n}", f"x{n+1}")) + ("b",)
    base = Alphabet(base_names)
    b = base.gen("b")
    u = b.inverse() * base.gen(f"x{n}").inverse() * b * base.gen(f"y{n+1}")
    v = base.gen(f"x{n}").inverse()
    v = v * _pair_commutators(base, range(n - 1, 0, -1), flipped=True)
    if params.r != INF:
        v = v * base.gen("x1", -params.q)
    if params.rprime != INF:
        v = v * base.gen(f"y{d}", params.p ** int(params.rprime))
    v = v * _pair_commutators(base, range(d, n + 1, -1), flipped=True)
    v = v * base.gen(f"y{n+1}")
    b_ambient = ambient.gen(f"y{n}").inverse() * ambient.gen(f"x{n+1}")
    edge_ambient = (ambient.gen(f"x{n+1}").inverse() * ambient.gen(f"y{n}")
                    * ambient.gen(f"x{n}").inverse() * ambient.gen(f"y{n}").inverse()
                    * ambient.gen(f"x{n+1}") * ambient.gen(f"y{n+1}"))
    # ambient y_n corresponds to t^-1 b^-1
    y_n_form = HnnForm(base.identity(),
                       ((-1, b.inverse()),))
    splitting = HnnSplitting(base, u, v)
    dictionary: dict[str, SyllableForm] = {}
    flatten: dict[str, Word] = {"b": b_ambient,
                                splitting.stable: ambient.gen(f"x{n+1}").inverse()}
    for name in ambient.names:
        if name in base:
            dictionary[name] = HnnForm(base.gen(name), ())
            flatten[name] = ambient.gen(name)
    dictionary[f"x{n+1}"] = HnnForm(base.identity(), ((-1, base.identity()),))
    dictionary[f"y{n}"] = y_n_form
    return EmbeddedSplitting(splitting, ambient, dictionary, flatten, edge_ambient,
                             descriptor={"params": params.to_json(),
                                         "kind": "hnn", "form": "beta",
                                         "n": n})


def build_split(params: DemuskinParams, descriptor: SplitDescriptor) -> EmbeddedSplitting:
    if descriptor.kind == "amalg":
        return split_amalg(params, descriptor.n)
    return split_hnn(params, form=descriptor.form)


def validate_splitting(es: EmbeddedSplitting, params: DemuskinParams) -> bool:
    """Tietze check: the splitting presents the one-relator group.

    Amalgam: reduce(u_A u_B^-1) is a free-group conjugate of w^{+-1}
    (the catalog instances give w on the nose).  HNN: eliminating the
    stable letter through the dictionary turns the relation
    ``t^-1 u t v^-1`` into a free-group conjugate of w^{+-1}.
    """
    w = relator(params)
    s = es.splitting
    if isinstance(s, AmalgamSplitting):
        lhs = es.to_ambient(s.boundary_a) * es.to_ambient(s.boundary_b).inverse()
        return conjugate_in_free(lhs, w) or conjugate_in_free(lhs, w.inverse())
    rel_alpha = Alphabet(s.base.names + (s.stable,))
    t = rel_alpha.gen(s.stable)
    rel = (t.inverse() * _reletter(rel_alpha, s.source) * t
           * _reletter(rel_alpha, s.target).inverse())
    flat = es.to_ambient(rel)
    return conjugate_in_free(flat, w) or conjugate_in_free(flat, w.inverse())


def twist_images(es: EmbeddedSplitting, k: int = 1) -> dict[str, Word]:
    """Dehn twist of a catalog splitting as an ambient generator-image map.

    Amalgam: fixes the A side and conjugates the B side by u_B^k.  HNN:
    fixes the base and sends the omitted generator ell to ell * u^k,
    which realizes t -> u^-k t on the stable letter.
    """
    ambient = es.ambient
    s = es.splitting
    images = {name: ambient.gen(name) for name in ambient.names}
    if isinstance(s, AmalgamSplitting):
        u_b = es.to_ambient(s.boundary_b)
        for name in s.alphabet_b.names:
            images[name] = u_b ** k * ambient.gen(name) * u_b ** (-k)
        return images
    omitted = [name for name in ambient.names if name not in s.base]
    if len(omitted) != 1:
        raise ParamError("twists are only defined for the catalog alpha-splittings")
    ell = omitted[0]
    images[ell] = ambient.gen(ell) * es.to_ambient(s.source) ** k
    return images


def neukirch_endo(n_top: int, alphabet: Optional[Alphabet] = None) -> dict[str, Word]:
    """Identity on every generator except x_N -> x_N x_{N-1}.

    Over the arithmetic generator set x0..xN (optionally with extra fixed
    generators supplied through ``alphabet``).
    """
    if n_top < 2 or n_top % 2:
        raise ParamError("the construction needs an even index N >= 2")
    if alphabet is None:
        alphabet = Alphabet(tuple(f"x{i}" for i in range(n_top + 1)))
    images = {name: alphabet.gen(name) for name in alphabet.names}
    images[f"x{n_top}"] = alphabet.gen(f"x{n_top}") * alphabet.gen(f"x{n_top - 1}")
    return images


def neukirch_example_splitting(n_top: int, p: int) -> EmbeddedSplitting:
    """HNN splitting of <x1..xn | x1^p [x1,x2]..[x_{n-1},x_n]> whose Dehn
    twist realizes the x_n -> x_n x_{n-1} endomorphism."""
    if n_top < 2 or n_top % 2:
        raise ParamError("the construction needs an even index N >= 2")
    ambient = Alphabet(tuple(f"x{i}" for i in range(1, n_top + 1)))
    base = Alphabet(ambient.names[:-1])
    prefix = base.gen("x1", p)
    for i in range(1, n_top - 2, 2):
        prefix = prefix * commutator(base.gen(f"x{i}"), base.gen(f"x{i+1}"))
    u = base.gen(f"x{n_top - 1}")
    v = prefix * u
    splitting = HnnSplitting(base, u, v)
    dictionary: dict[str, SyllableForm] = {
        name: HnnForm(base.gen(name), ()) for name in base.names
    }
    dictionary[f"x{n_top}"] = HnnForm(base.identity(), ((-1, base.identity()),))
    flatten = {name: ambient.gen(name) for name in base.names}
    flatten[splitting.stable] = ambient.gen(f"x{n_top}").inverse()
    return EmbeddedSplitting(splitting, ambient, dictionary, flatten,
                             ambient.gen(f"x{n_top - 1}"),
                             descriptor={"kind": "hnn", "form": "arithmetic-example",
                                         "p": p, "n": n_top})


def two_edge_refinement(params: DemuskinParams, n1: int, n2: int) -> GoGraph:
    """Common refinement of the amalgam splittings at n1 < n2.

    Three vertices; the middle one carries a fresh generator ``z`` standing
    for the shared boundary x1^q[x1,y1]..[x_{n1},y_{n1}].  Collapsing one
    edge recovers the amalgam at n1, collapsing the other the one at n2.
    """
    d = params.d
    if not 1 <= n1 < n2 < d:
        raise ParamError("need 1 <= n1 < n2 < d")
    names1 = tuple(f"{g}{i}" for i in range(1, n1 + 1) for g in ("x", "y"))
    names2 = ("z",) + tuple(f"{g}{i}" for i in range(n1 + 1, n2 + 1) for g in ("x", "y"))
    names3 = tuple(f"{g}{i}" for i in range(n2 + 1, d + 1) for g in ("x", "y"))
    a1, a2, a3 = Alphabet(names1), Alphabet(names2), Alphabet(names3)
    q1 = boundary_a_word(params, n1, a1)
    mid = a2.gen("z") * _pair_commutators(a2, range(n1 + 1, n2 + 1))
    u_b2 = boundary_b_word(params, n2, a3)
    return GoGraph(
        (GoVertex("V1", a1), GoVertex("V2", a2), GoVertex("V3", a3)),
        (GoEdge("e1", "e1r", "V2", a2.gen("z")),
         GoEdge("e1r", "e1", "V1", q1),
         GoEdge("e2", "e2r", "V3", u_b2),
         GoEdge("e2r", "e2", "V2", mid)),
        frozenset({"e1", "e1r", "e2", "e2r"}),
    )


# ---------------------------------------------------------------------------
# Whitehead minimization


@dataclass(frozen=True)
class WhiteheadMove:
    """Type-II automorphism (S, a): multiplier a, support S (a in S).

    A letter x not in {a, a^-1} maps to x' = l * x * r where r = a when
    x in S and l = a^-1 when x^-1 in S.
    """

    multiplier: int            # signed letter
    support: frozenset[int]    # signed letters, contains multiplier

    def images(self, alphabet: Alphabet) -> dict[str, Word]:
        a = self.multiplier
        out: dict[str, Word] = {}
        for i, name in enumerate(alphabet.names):
            g = i + 1
            if g == abs(a):
                out[name] = alphabet.gen(name)
                continue
            letters: list[int] = []
            if -g in self.support:
                letters.append(-a)
            letters.append(g)
            if g in self.support:
                letters.append(a)
            out[name] = Word(alphabet, tuple(letters))
        return out

    def describe(self, alphabet: Alphabet) -> dict:
        def label(l: int) -> str:
            name = alphabet.names[abs(l) - 1]
            return name if l > 0 else f"{name}^-1"
        return {"multiplier": label(self.multiplier),
                "support": sorted(label(l) for l in self.support)}


def whitehead_moves(alphabet: Alphabet) -> list[WhiteheadMove]:
    """All type-II moves; 2r * 2^(2r-2) of them at rank r."""
    rank = alphabet.rank
    signed = [g for i in range(1, rank + 1) for g in (i, -i)]
    moves = []
    for a in signed:
        others = [l for l in signed if abs(l) != abs(a)]
        for bits in itertools.product((False, True), repeat=len(others)):
            support = frozenset([a] + [l for l, b in zip(others, bits) if b])
            moves.append(WhiteheadMove(a, support))
    return moves


def cyclic_length(w: Word) -> int:
    core, _ = cyclic_reduce(w)
    return len(core)


def _apply_images(images: Mapping[str, Word], w: Word) -> Word:
    return apply_endo(images, w)


@dataclass(frozen=True)
class WhiteheadReport:
    word: Word
    minimal: bool
    length: int
    reducing_move: Optional[dict] = None
    reduced_length: Optional[int] = None

    def to_json(self) -> dict:
        return {"word": self.word.to_json(), "minimal": self.minimal,
                "length": self.length, "reducing_move": self.reducing_move,
                "reduced_length": self.reduced_length}


def whitehead_minimal(w: Word) -> WhiteheadReport:
    """Is the cyclic word of minimal length in its automorphism orbit?

    Checks every type-II move (permutations and inversions preserve length,
    so they cannot shorten); reports the first strictly reducing move found.
    """
    core, _ = cyclic_reduce(w)
    base_len = len(core)
    for move in whitehead_moves(w.alphabet):
        img = _apply_images(move.images(w.alphabet), core)
        new_len = cyclic_length(img)
        if new_len < base_len:
            return WhiteheadReport(core, False, base_len,
                                   move.describe(w.alphabet), new_len)
    return WhiteheadReport(core, True, base_len)


def nielsen_separation(params_base: DemuskinParams, rprimes: Sequence,
                       primes: Sequence[int] = ()) -> dict:
    """Separate the relators w_{r'} by Whitehead-minimal cyclic length.

    Distinct minimal lengths certify distinct Nielsen classes (hence
    non-isomorphic one-relator quotients); equal lengths are inconclusive.
    Also reports mod-l primitivity of each relator for the supplied primes.
    """
    if not rprimes:
        raise ParamError("need at least one rprime value")
    rows = []
    for rp in rprimes:
        params = DemuskinParams(params_base.p, params_base.d, params_base.r, rp)
        w = relator(params)
        report = whitehead_minimal(w)
        primitivity = {}
        for l in primes:
            if l == params.p:
                continue
            _, prim = abelianize_mod_l(w, l)
            primitivity[str(l)] = prim
        rows.append({"rprime": _level_json(params.rprime),
                     "length": report.length,
                     "minimal": report.minimal,
                     "primitive_mod": primitivity})
    pairs = []
    for i in range(len(rows)):
        for j in range(i + 1, len(rows)):
            distinct = (rows[i]["minimal"] and rows[j]["minimal"]
                        and rows[i]["length"] != rows[j]["length"])
            pairs.append({"pair": [rows[i]["rprime"], rows[j]["rprime"]],
                          "verdict": "distinct" if distinct else "inconclusive"})
    return {"rows": rows, "pairs": pairs}


# ---------------------------------------------------------------------------
# curve-complex slices


def curve_complex_slice(params_base: DemuskinParams, rprime_max: int) -> dict:
    """Finite slice of the splitting complex: one vertex per splitting class.

    One HNN class (over the r' = inf member) plus one amalgam class per
    (n, r') with 1 <= n < d and r <= r' <= rprime_max.  Edges join classes
    with a compatibility witness; the provenance of every examined pair is
    recorded (splittings over different ambient relators cannot be compared
    by the hyperbolicity test and stay inconclusive).
    """
    from .normal_forms import CompatibleWitness, Intersecting, splittings_intersect

    if rprime_max < params_base.r:
        raise ParamError("rprime_max must be at least r")
    vertices: list[dict] = [{"kind": "hnn", "rprime": "inf"}]
    embedded: list[Optional[EmbeddedSplitting]] = [
        split_hnn(DemuskinParams(params_base.p, params_base.d, params_base.r, INF))
    ]
    for rp in range(int(params_base.r), rprime_max + 1):
        for n in range(1, params_base.d):
            params = DemuskinParams(params_base.p, params_base.d, params_base.r, rp)
            vertices.append({"kind": {"amalg": n}, "rprime": rp})
            embedded.append(split_amalg(params, n))
    edges: list[list[int]] = []
    provenance: list[dict] = []
    for i in range(len(vertices)):
        for j in range(i + 1, len(vertices)):
            vi, vj = vertices[i], vertices[j]
            entry = {"pair": [i, j]}
            if vi["rprime"] != vj["rprime"]:
                entry["verdict"] = "inconclusive"
                entry["via"] = "different ambient relator"
                provenance.append(entry)
                continue
            n_i, n_j = vi["kind"]["amalg"], vj["kind"]["amalg"]
            params = DemuskinParams(params_base.p, params_base.d,
                                    params_base.r, vi["rprime"])
            refinement = two_edge_refinement(params, min(n_i, n_j), max(n_i, n_j))
            verdict = splittings_intersect(embedded[i], embedded[j], refinement)
            if isinstance(verdict, Intersecting):
                entry["verdict"] = "intersecting"
                entry["via"] = "hyperbolic"
                entry["witness"] = verdict.witness.to_json()
            elif isinstance(verdict, CompatibleWitness):
                entry["verdict"] = "compatible"
                entry["via"] = "refinement"
                edges.append([i, j])
            else:
                entry["verdict"] = "inconclusive"
                entry["via"] = verdict.reason
            provenance.append(entry)
    return {
        "schema_version": 1,
        "params": {**params_base.to_json(), "rprime_max": rprime_max},
        "vertices": vertices,
        "edges": edges,
        "provenance": provenance,
    }


def slice_to_dot(slice_data: dict) -> str:
    """DOT rendering of a curve-complex slice."""
    lines = ["graph curve_complex {"]
    for i, v in enumerate(slice_data["vertices"]):
        if v["kind"] == "hnn":
            label = "HNN (r'=inf)"
        else:
            label = f"amalg n={v['kind']['amalg']} r'={v['rprime']}"
        lines.append(f'  v{i} [label="{label}"];')
    for i, j in slice_data["edges"]:
        lines.append(f"  v{i} -- v{j};")
    lines.append("}")
    return "\n".join(lines) + "\n"
