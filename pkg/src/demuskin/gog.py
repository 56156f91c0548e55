"""Graphs of groups with free vertex groups and infinite-cyclic edge groups.

Edges come in directed pairs ``e, ebar`` with a fixed-point-free reversal;
each directed edge stores the boundary word of the edge-group generator
inside its terminal vertex group.  A designated spanning tree selects the
fundamental-group presentation: one stable letter per non-tree edge orbit
with relator ``t phi_e(c) t^-1 phi_ebar(c)^-1``, and one identification
relator ``phi_e(c) phi_ebar(c)^-1`` per tree orbit.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Optional, Union

from .words import Alphabet, Word, WordError


class GraphError(ValueError):
    """Structurally invalid graph of groups."""


@dataclass(frozen=True)
class Presentation:
    alphabet: Alphabet
    relators: tuple[Word, ...]

    def to_json(self) -> dict:
        return {
            "alphabet": self.alphabet.to_json(),
            "relators": [r.to_json() for r in self.relators],
        }

    @classmethod
    def from_json(cls, data: dict) -> "Presentation":
        alpha = Alphabet.from_json(data["alphabet"])
        rels = tuple(Word.from_json(alpha, r) for r in data["relators"])
        return cls(alpha, rels)


VertexData = Union[Alphabet, Presentation]


def vertex_alphabet(data: VertexData) -> Alphabet:
    return data.alphabet if isinstance(data, Presentation) else data


@dataclass(frozen=True)
class GoVertex:
    id: str
    data: VertexData


@dataclass(frozen=True)
class GoEdge:
    id: str
    reverse: str
    target: str          # terminal vertex id
    boundary: Word       # image of the edge generator in the terminal vertex group


@dataclass(frozen=True)
class GoGraph:
    vertices: tuple[GoVertex, ...]
    edges: tuple[GoEdge, ...]
    tree: frozenset[str]  # directed edge ids, closed under reversal

    def vertex(self, vid: str) -> GoVertex:
        for v in self.vertices:
            if v.id == vid:
                return v
        raise GraphError(f"no vertex {vid!r}")

    def edge(self, eid: str) -> GoEdge:
        for e in self.edges:
            if e.id == eid:
                return e
        raise GraphError(f"no edge {eid!r}")

    def orbits(self) -> list[tuple[str, str]]:
        """Geometric edges as (canonical id, reverse id), sorted."""
        seen = set()
        out = []
        for e in self.edges:
            key = min(e.id, e.reverse)
            if key not in seen:
                seen.add(key)
                out.append((key, self.edge(key).reverse))
        return sorted(out)

    def initial(self, eid: str) -> str:
        return self.edge(self.edge(eid).reverse).target

    def to_json(self) -> dict:
        verts = []
        for v in self.vertices:
            if isinstance(v.data, Presentation):
                verts.append({"id": v.id, "presentation": v.data.to_json()})
            else:
                verts.append({"id": v.id, "alphabet": v.data.to_json()})
        return {
            "vertices": verts,
            "edges": [
                {"id": e.id, "reverse": e.reverse, "target": e.target,
                 "boundary": e.boundary.to_json()}
                for e in self.edges
            ],
            "tree": sorted(self.tree),
        }

    @classmethod
    def from_json(cls, data: dict) -> "GoGraph":
        verts = []
        for v in data["vertices"]:
            if "presentation" in v:
                verts.append(GoVertex(v["id"], Presentation.from_json(v["presentation"])))
            else:
                verts.append(GoVertex(v["id"], Alphabet.from_json(v["alphabet"])))
        vmap = {v.id: vertex_alphabet(v.data) for v in verts}
        edges = tuple(
            GoEdge(e["id"], e["reverse"], e["target"],
                   Word.from_json(vmap[e["target"]], e["boundary"]))
            for e in data["edges"]
        )
        return cls(tuple(verts), edges, frozenset(data["tree"]))


def validate(g: GoGraph) -> list[str]:
    """Check all invariants; returns diagnostics (empty means valid)."""
    problems = []
    vids = [v.id for v in g.vertices]
    if len(set(vids)) != len(vids):
        problems.append("duplicate vertex ids")
    eids = [e.id for e in g.edges]
    if len(set(eids)) != len(eids):
        problems.append("duplicate edge ids")
    emap = {e.id: e for e in g.edges}
    for e in g.edges:
        if e.reverse == e.id:
            problems.append(f"edge {e.id} is its own reversal")
        elif e.reverse not in emap:
            problems.append(f"edge {e.id} has missing reversal {e.reverse}")
        elif emap[e.reverse].reverse != e.id:
            problems.append(f"reversal of {e.id} is not an involution")
        if e.target not in vids:
            problems.append(f"edge {e.id} targets missing vertex {e.target}")
        else:
            va = vertex_alphabet(g.vertex(e.target).data)
            if e.boundary.alphabet != va:
                problems.append(f"edge {e.id} boundary not over target vertex generators")
        if e.boundary.is_identity:
            problems.append(f"trivial boundary injection on edge {e.id}")
    seen: set[str] = set()
    names_seen: set[str] = set()
    for v in g.vertices:
        for name in vertex_alphabet(v.data).names:
            if name in names_seen:
                problems.append(f"generator label {name!r} reused across vertices")
            names_seen.add(name)
    # connectivity over geometric edges
    if g.vertices:
        reach = {g.vertices[0].id}
        frontier = [g.vertices[0].id]
        while frontier:
            cur = frontier.pop()
            for e in g.edges:
                if g.initial(e.id) == cur and e.target not in reach:
                    reach.add(e.target)
                    frontier.append(e.target)
        if reach != set(vids):
            problems.append("not connected")
    # spanning tree: closed under reversal, acyclic, touches every vertex
    for eid in g.tree:
        if eid not in emap:
            problems.append(f"tree edge {eid} not in graph")
        elif emap[eid].reverse not in g.tree:
            problems.append(f"tree not closed under reversal at {eid}")
    tree_orbits = {frozenset((e, emap[e].reverse)) for e in g.tree if e in emap}
    if len(tree_orbits) != max(len(vids) - 1, 0):
        problems.append("tree edge count is not |V| - 1")
    else:
        reach = {g.vertices[0].id} if g.vertices else set()
        frontier = list(reach)
        while frontier:
            cur = frontier.pop()
            for eid in g.tree:
                if eid in emap and g.initial(eid) == cur and emap[eid].target not in reach:
                    reach.add(emap[eid].target)
                    frontier.append(emap[eid].target)
        if g.vertices and reach != set(vids):
            problems.append("tree does not touch every vertex")
    return problems


def _embed(big: Alphabet, w: Word) -> Word:
    """Re-express w over the merged alphabet by generator name."""
    letters = []
    for l in w.letters:
        name = w.alphabet.names[abs(l) - 1]
        idx = big.index(name) + 1
        letters.append(idx if l > 0 else -idx)
    return Word(big, tuple(letters))


def stable_letter_name(canonical_edge_id: str) -> str:
    return f"t_{canonical_edge_id}"


def fundamental_presentation(g: GoGraph) -> Presentation:
    """Presentation of the fundamental group at the designated spanning tree."""
    problems = validate(g)
    if problems:
        raise GraphError("; ".join(problems))
    names: list[str] = []
    for v in g.vertices:
        names.extend(vertex_alphabet(v.data).names)
    non_tree = [(e, ebar) for e, ebar in g.orbits() if e not in g.tree]
    for e, _ in non_tree:
        t = stable_letter_name(e)
        if t in names:
            raise GraphError(f"stable letter name {t!r} collides with a generator")
        names.append(t)
    big = Alphabet(tuple(names))
    relators: list[Word] = []
    for v in g.vertices:
        if isinstance(v.data, Presentation):
            relators.extend(_embed(big, r) for r in v.data.relators)
    for e, ebar in g.orbits():
        phi_e = _embed(big, g.edge(e).boundary)
        phi_ebar = _embed(big, g.edge(ebar).boundary)
        if e in g.tree:
            relators.append(phi_e * phi_ebar.inverse())
        else:
            t = big.gen(stable_letter_name(e))
            relators.append(t * phi_e * t.inverse() * phi_ebar.inverse())
    return Presentation(big, tuple(relators))


def _spanning_tree(vertex_ids: list[str], edges: list[GoEdge],
                   initial: Mapping[str, str]) -> frozenset[str]:
    """BFS spanning tree (directed ids, closed under reversal), deterministic."""
    if not vertex_ids:
        return frozenset()
    emap = {e.id: e for e in edges}
    tree: set[str] = set()
    reach = {vertex_ids[0]}
    changed = True
    while changed:
        changed = False
        for e in sorted(emap.values(), key=lambda e: e.id):
            if initial[e.id] in reach and e.target not in reach:
                reach.add(e.target)
                tree.add(e.id)
                tree.add(e.reverse)
                changed = True
    if reach != set(vertex_ids):
        raise GraphError("not connected")
    return frozenset(tree)


def collapse_subtree(g: GoGraph, vertex_ids: Iterable[str],
                     edge_ids: Iterable[str] = ()) -> GoGraph:
    """Collapse a connected subgraph to a single vertex carrying its presentation.

    ``edge_ids`` may name either direction of each collapsed edge; the orbit
    is collapsed whole.  Edges from outside into the subgraph are re-targeted
    to the new vertex.
    """
    vset = set(vertex_ids)
    eset: set[str] = set()
    for eid in edge_ids:
        e = g.edge(eid)
        eset.add(e.id)
        eset.add(e.reverse)
    for eid in eset:
        e = g.edge(eid)
        if e.target not in vset or g.initial(eid) not in vset:
            raise GraphError(f"collapsed edge {eid} leaves the subgraph")
    sub_vertices = tuple(v for v in g.vertices if v.id in vset)
    if not sub_vertices:
        raise GraphError("empty subgraph")
    sub_edges = tuple(e for e in g.edges if e.id in eset)
    initial = {e.id: g.initial(e.id) for e in sub_edges}
    sub_tree = _spanning_tree([v.id for v in sub_vertices], list(sub_edges), initial)
    sub = GoGraph(sub_vertices, sub_edges, sub_tree)
    pres = fundamental_presentation(sub)
    new_id = "+".join(sorted(vset))
    new_data: VertexData
    if len(sub_vertices) > 1 or sub_edges:
        new_data = pres
    else:
        new_data = sub_vertices[0].data
    new_vertices = tuple(v for v in g.vertices if v.id not in vset) + (
        GoVertex(new_id, new_data),
    )
    new_edges = []
    for e in g.edges:
        if e.id in eset:
            continue
        target = new_id if e.target in vset else e.target
        boundary = e.boundary
        if e.target in vset:
            boundary = _embed(vertex_alphabet(new_data), e.boundary)
        new_edges.append(GoEdge(e.id, e.reverse, target, boundary))
    remaining_ids = [v.id for v in new_vertices]
    initial2 = {}
    emap = {e.id: e for e in new_edges}
    for e in new_edges:
        initial2[e.id] = emap[e.reverse].target
    new_tree = _spanning_tree(remaining_ids, new_edges, initial2)
    return GoGraph(new_vertices, tuple(new_edges), new_tree)


@dataclass(frozen=True)
class TwistEndo:
    """A Dehn-twist endomorphism as generator images plus its provenance."""

    images: Mapping[str, Word]
    graph: Optional[GoGraph] = None
    gammas: Optional[Mapping[str, int]] = None
    base: Optional[str] = None
    k: int = 1

    def __getitem__(self, name: str) -> Word:
        return self.images[name]


def _tree_paths(g: GoGraph, base: str) -> dict[str, list[str]]:
    """Directed tree-edge ids along the path base -> v, for every vertex v."""
    emap = {e.id: e for e in g.edges}
    paths = {base: []}
    frontier = [base]
    while frontier:
        cur = frontier.pop(0)
        for eid in sorted(g.tree):
            e = emap[eid]
            if g.initial(eid) == cur and e.target not in paths:
                paths[e.target] = paths[cur] + [eid]
                frontier.append(e.target)
    return paths


def dehn_twist(g: GoGraph, gammas: Mapping[str, int], base: str, k: int = 1) -> TwistEndo:
    """Dehn twist with edge-generator exponents ``gammas`` (per geometric edge).

    Keys of ``gammas`` are canonical orbit ids (min of the two directed ids).
    Stable letters map to ``phi_ebar(c)^(k*m) * t``; a vertex generator is
    conjugated by the product of the twisting elements along the tree path
    from the base vertex, each embedded at the far end of its edge.
    """
    pres = fundamental_presentation(g)
    big = pres.alphabet
    g.vertex(base)
    orbit_of = {}
    for e, ebar in g.orbits():
        orbit_of[e] = e
        orbit_of[ebar] = e
    for key in gammas:
        if key not in orbit_of or orbit_of[key] != key:
            raise GraphError(f"gamma key {key!r} is not a canonical edge id")
    paths = _tree_paths(g, base)
    images: dict[str, Word] = {}
    for v in g.vertices:
        conj = big.identity()
        for eid in paths[v.id]:
            m = gammas.get(orbit_of[eid], 0)
            conj = conj * _embed(big, g.edge(eid).boundary) ** (k * m)
        for name in vertex_alphabet(v.data).names:
            gen = big.gen(name)
            images[name] = conj * gen * conj.inverse()
    for e, ebar in g.orbits():
        if e in g.tree:
            continue
        m = gammas.get(e, 0)
        t = big.gen(stable_letter_name(e))
        images[stable_letter_name(e)] = _embed(big, g.edge(ebar).boundary) ** (k * m) * t
    return TwistEndo(images, graph=g, gammas=dict(gammas), base=base, k=k)


def apply_endo(endo: Union[TwistEndo, Mapping[str, Word]], w: Word) -> Word:
    """Substitute generator images and reduce.

    Composition-compatible: ``apply(e1, apply(e2, w))`` equals applying the
    composed image map.
    """
    images = endo.images if isinstance(endo, TwistEndo) else endo
    if not images:
        raise WordError("empty generator-image map")
    target = next(iter(images.values())).alphabet
    out = target.identity()
    for l in w.letters:
        name = w.alphabet.names[abs(l) - 1]
        if name not in images:
            raise WordError(f"unmapped generator {name!r}")
        img = images[name]
        out = out * (img if l > 0 else img.inverse())
    return out


def compose_images(outer: Mapping[str, Word], inner: Mapping[str, Word]) -> dict[str, Word]:
    """Generator-image map of ``outer o inner``."""
    return {name: apply_endo(outer, w) for name, w in inner.items()}


def to_dot(g: GoGraph) -> str:
    """Undirected DOT rendering with boundary words as edge labels."""
    lines = ["graph gog {"]
    for v in g.vertices:
        label = f"{v.id}: {', '.join(vertex_alphabet(v.data).names)}"
        lines.append(f'  "{v.id}" [label="{label}"];')
    for e, ebar in g.orbits():
        ed, rd = g.edge(e), g.edge(ebar)
        style = "solid" if e in g.tree else "dashed"
        label = f"{rd.boundary} | {ed.boundary}"
        lines.append(
            f'  "{g.initial(e)}" -- "{ed.target}" [label="{label}", style={style}];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
