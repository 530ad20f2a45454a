"""Trees whose leaves carry D-set elements.

Finite D-sets satisfying D1..D4 are exactly the leaf systems of finite
trees in which every internal node has degree at least three.  This module
holds the tree type, the two directions of that correspondence, and the
splitting dictionaries read off from internal nodes and edges.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional

from .core import DSet, InputError, InvariantViolation, NotRepresentable, check_axioms


@dataclass(frozen=True)
class LeafTree:
    """Finite tree with element ids on its leaves.

    nodes and edges are stored sorted, edges as (min, max) pairs.  leaves
    maps node id to element id; labeled nodes must have degree <= 1,
    unlabeled nodes degree >= 3, and the labels must be exactly 0..k-1 for
    k leaves.  Everything is validated at construction.
    """

    nodes: tuple[int, ...]
    edges: tuple[tuple[int, int], ...]
    leaves: tuple[tuple[int, int], ...]  # (node id, element id), sorted by node

    def __init__(
        self,
        nodes: Iterable[int],
        edges: Iterable[tuple[int, int]],
        leaves: Mapping[int, int] | Iterable[tuple[int, int]],
    ) -> None:
        node_tuple = tuple(sorted(set(int(v) for v in nodes)))
        edge_set = set()
        for u, v in edges:
            u, v = int(u), int(v)
            if u == v:
                raise InputError(f"self-loop at node {u}")
            edge_set.add((min(u, v), max(u, v)))
        leaf_items = leaves.items() if isinstance(leaves, Mapping) else leaves
        leaf_tuple = tuple(sorted((int(a), int(b)) for a, b in leaf_items))
        object.__setattr__(self, "nodes", node_tuple)
        object.__setattr__(self, "edges", tuple(sorted(edge_set)))
        object.__setattr__(self, "leaves", leaf_tuple)
        self._validate()

    def _validate(self) -> None:
        node_set = set(self.nodes)
        for u, v in self.edges:
            if u not in node_set or v not in node_set:
                raise InputError(f"edge ({u},{v}) mentions an unknown node")
        if len(self.edges) != max(0, len(self.nodes) - 1):
            raise InputError("a tree on k nodes needs exactly k-1 edges")
        if self.nodes and not self._connected():
            raise InputError("tree is not connected")
        labeled = [u for u, _ in self.leaves]
        if len(set(labeled)) != len(labeled):
            raise InputError("a node may carry at most one element label")
        for u in labeled:
            if u not in node_set:
                raise InputError(f"label on unknown node {u}")
        elems = sorted(e for _, e in self.leaves)
        if elems != list(range(len(elems))):
            raise InputError("leaf labels must be exactly 0..k-1")
        degree = self.degrees()
        label_set = set(labeled)
        for u in self.nodes:
            if u in label_set:
                if degree[u] > 1:
                    raise InputError(f"labeled node {u} has degree {degree[u]}")
            elif degree[u] < 3:
                raise InputError(f"internal node {u} has degree {degree[u]} < 3")

    def _connected(self) -> bool:
        adj = self.adjacency()
        seen = {self.nodes[0]}
        stack = [self.nodes[0]]
        while stack:
            for nb in adj[stack.pop()]:
                if nb not in seen:
                    seen.add(nb)
                    stack.append(nb)
        return len(seen) == len(self.nodes)

    def adjacency(self) -> dict[int, list[int]]:
        adj: dict[int, list[int]] = {u: [] for u in self.nodes}
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        for u in adj:
            adj[u].sort()
        return adj

    def degrees(self) -> dict[int, int]:
        deg = {u: 0 for u in self.nodes}
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def leaf_map(self) -> dict[int, int]:
        """Node id -> element id."""
        return dict(self.leaves)

    def element_node(self) -> dict[int, int]:
        """Element id -> node id."""
        return {e: u for u, e in self.leaves}

    @property
    def n_elements(self) -> int:
        return len(self.leaves)

    def internal_nodes(self) -> list[int]:
        labeled = {u for u, _ in self.leaves}
        return [u for u in self.nodes if u not in labeled]

    def to_json(self) -> str:
        payload = {
            "nodes": list(self.nodes),
            "edges": [list(e) for e in self.edges],
            "leaves": {str(u): e for u, e in self.leaves},
        }
        return json.dumps(payload, sort_keys=True, separators=(",", ":"))

    @classmethod
    def from_json(cls, text: str) -> "LeafTree":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not isinstance(payload, dict):
            raise InputError("tree JSON must be an object")
        try:
            nodes = [int(v) for v in payload.get("nodes", [])]
            edges = [(int(u), int(v)) for u, v in payload.get("edges", [])]
            leaves = {int(k): int(v) for k, v in payload.get("leaves", {}).items()}
        except (TypeError, ValueError) as exc:
            raise InputError(f"malformed tree JSON: {exc}") from exc
        return cls(nodes, edges, leaves)


def _paths_between_leaves(t: LeafTree) -> dict[tuple[int, int], frozenset[int]]:
    """Node set of the path between each pair of element ids (by element)."""
    adj = t.adjacency()
    by_elem = t.element_node()
    out: dict[tuple[int, int], frozenset[int]] = {}
    for e, start in by_elem.items():
        parent: dict[int, Optional[int]] = {start: None}
        order = [start]
        for u in order:
            for nb in adj[u]:
                if nb not in parent:
                    parent[nb] = u
                    order.append(nb)
        for f, target in by_elem.items():
            if f <= e:
                continue
            path = [target]
            while path[-1] != start:
                path.append(parent[path[-1]])  # type: ignore[arg-type]
            out[(e, f)] = frozenset(path)
    return out


def d_from_tree(t: LeafTree) -> DSet:
    """Leaf relation of a tree: D(wx;yz) iff the two leaf paths are disjoint.

    Elements inherit the leaf labels; the result is monochromatic.
    """
    n = t.n_elements
    if n < 4:
        return DSet.build(n)
    paths = _paths_between_leaves(t)

    def path(a: int, b: int) -> frozenset[int]:
        return paths[(a, b) if a < b else (b, a)]

    quads = []
    elems = sorted(t.element_node())
    for i in range(n):
        for j in range(i + 1, n):
            for k in range(j + 1, n):
                for l in range(k + 1, n):
                    w, x, y, z = elems[i], elems[j], elems[k], elems[l]
                    if path(w, x).isdisjoint(path(y, z)):
                        quads.append((w, x, y, z))
                    if path(w, y).isdisjoint(path(x, z)):
                        quads.append((w, y, x, z))
                    if path(w, z).isdisjoint(path(x, y)):
                        quads.append((w, z, x, y))
    return DSet.build(n, quads)


def _convex_hull(t: LeafTree, elems: Iterable[int], paths) -> frozenset[int]:
    """Union of all leaf-to-leaf paths inside one set of elements."""
    chosen = sorted(set(elems))
    by_elem = t.element_node()
    if len(chosen) == 1:
        return frozenset({by_elem[chosen[0]]})
    hull: set[int] = set()
    for i, a in enumerate(chosen):
        for b in chosen[i + 1 :]:
            hull |= paths[(a, b)]
    return frozenset(hull)


def tree_from_dset(d: DSet) -> LeafTree:
    """Reconstruct the unique tree whose leaf relation is d.

    Elements are attached in increasing id order.  Each new element e is
    placed against the splitting it induces on the part already built: with
    exactly two sectors the one uncovered edge is subdivided by a fresh
    internal node carrying e, with more sectors e is attached to the one
    uncovered node.  Fresh internal ids are allocated from d.n upward, so
    leaf node ids coincide with element ids.

    Raises NotRepresentable when d fails D1..D4 (no tree exists then), and
    treats a missing or ambiguous attachment site as corrupt input.
    """
    report = check_axioms(d)
    if not report.core_pass:
        raise NotRepresentable(f"relation table fails D1..D4: {report.as_dict()}")
    n = d.n
    if n == 0:
        return LeafTree((), (), {})
    if n == 1:
        return LeafTree((0,), (), {0: 0})
    if n == 2:
        return LeafTree((0, 1), ((0, 1),), {0: 0, 1: 1})

    from .splittings import induced_splitting

    nodes: set[int] = {0, 1}
    edges: set[tuple[int, int]] = {(0, 1)}
    leaf_of: dict[int, int] = {0: 0, 1: 1}  # node -> element
    next_internal = n

    for e in range(2, n):
        t = LeafTree(nodes, edges, leaf_of)
        split = induced_splitting(d, range(e), e)
        paths = _paths_between_leaves(t)
        hulls = [_convex_hull(t, sector, paths) for sector in split.sectors]
        covered: set[int] = set().union(*hulls)
        if len(split.sectors) == 2:
            crossing = [
                (u, v)
                for u, v in sorted(edges)
                if (u in hulls[0]) != (v in hulls[0]) and u in covered and v in covered
            ]
            if len(crossing) != 1:
                raise NotRepresentable(
                    f"element {e}: expected one edge between sector hulls, found {crossing}"
                )
            u, v = crossing[0]
            m = next_internal
            next_internal += 1
            edges.remove((u, v))
            edges.add((min(u, m), max(u, m)))
            edges.add((min(v, m), max(v, m)))
            edges.add((min(e, m), max(e, m)))
            nodes.update({m, e})
            leaf_of[e] = e
        else:
            free = [u for u in sorted(nodes) if u not in covered]
            if len(free) != 1:
                raise NotRepresentable(
                    f"element {e}: expected one attachment node, found {free}"
                )
            site = free[0]
            edges.add((min(e, site), max(e, site)))
            nodes.add(e)
            leaf_of[e] = e

    return LeafTree(nodes, edges, leaf_of)


@dataclass(frozen=True)
class TreeCorrespondence:
    """Splittings of a tree-derived D-set, indexed by their tree feature.

    node_splittings maps each internal node to the partition of elements
    given by the components of the tree minus that node; edge_splittings
    does the same for edges, always a two-sector partition.
    """

    node_splittings: tuple[tuple[int, "object"], ...]
    edge_splittings: tuple[tuple[tuple[int, int], "object"], ...]

    def all_splittings(self) -> list:
        out = [s for _, s in self.node_splittings]
        out.extend(s for _, s in self.edge_splittings)
        return out


def splittings_from_tree(t: LeafTree) -> TreeCorrespondence:
    """Read every splitting off the tree.

    Removing an internal node of degree k leaves k components and hence a
    k-sector splitting; removing an edge leaves two.
    """
    from .splittings import Splitting

    adj = t.adjacency()
    leaf_of = t.leaf_map()

    def component_elements(start: int, banned_nodes: frozenset[int], banned_edge) -> frozenset[int]:
        seen = {start}
        stack = [start]
        found = set()
        while stack:
            u = stack.pop()
            if u in leaf_of:
                found.add(leaf_of[u])
            for nb in adj[u]:
                if nb in seen or nb in banned_nodes:
                    continue
                if banned_edge and {u, nb} == set(banned_edge):
                    continue
                seen.add(nb)
                stack.append(nb)
        return frozenset(found)

    node_entries = []
    for mu in t.internal_nodes():
        sectors = [
            component_elements(nb, frozenset({mu}), None) for nb in adj[mu]
        ]
        node_entries.append((mu, Splitting.build(sectors)))

    edge_entries = []
    for u, v in t.edges:
        side_u = component_elements(u, frozenset(), (u, v))
        side_v = component_elements(v, frozenset(), (u, v))
        edge_entries.append(((u, v), Splitting.build([side_u, side_v])))

    return TreeCorrespondence(tuple(node_entries), tuple(edge_entries))


def _centers(adj: dict[int, set[int]]) -> list[int]:
    """One or two middle nodes, found by repeatedly stripping leaves."""
    live = {u for u in adj}
    degs = {u: len(adj[u]) for u in live}
    if len(live) <= 2:
        return sorted(live)
    shell = [u for u in live if degs[u] <= 1]
    while len(live) > 2:
        nxt = []
        for u in shell:
            live.discard(u)
            for nb in adj[u]:
                if nb in live:
                    degs[nb] -= 1
                    if degs[nb] == 1:
                        nxt.append(nb)
        shell = nxt
    return sorted(live)


def _rooted_code(u: int, parent: Optional[int], adj, token) -> tuple:
    children = sorted(
        (_rooted_code(v, u, adj, token) for v in adj[u] if v != parent),
    )
    return (token(u), tuple(children))


def canonical_form(t: LeafTree, leaf_tokens: Optional[Iterable] = None) -> tuple:
    """Order-free encoding of the tree, equal exactly for isomorphic trees.

    With leaf_tokens None each leaf is encoded by its element id, so two
    trees get the same form exactly when a graph isomorphism matching the
    labels exists.  Passing a sequence indexed by element id (for example
    a color tuple, or a constant) coarsens the leaf encoding accordingly;
    all-equal tokens give plain shape isomorphism.

    The tree is rooted at its center; for an edge center the two rootings
    are tried and the smaller encoding kept.
    """
    if not t.nodes:
        return ("empty",)
    tokens = list(leaf_tokens) if leaf_tokens is not None else None
    leaf_of = t.leaf_map()

    def token(u: int):
        if u not in leaf_of:
            return ("i",)
        e = leaf_of[u]
        return ("leaf", tokens[e] if tokens is not None else e)

    adj = {u: set(vs) for u, vs in t.adjacency().items()}
    centers = _centers(adj)
    codes = [_rooted_code(c, None, t.adjacency(), token) for c in centers]
    return min(codes)


def are_isomorphic_trees(t1: LeafTree, t2: LeafTree, respect_labels: bool = True) -> bool:
    if respect_labels:
        return canonical_form(t1) == canonical_form(t2)
    ones1 = [0] * t1.n_elements
    ones2 = [0] * t2.n_elements
    return canonical_form(t1, ones1) == canonical_form(t2, ones2)


def export_dot(
    t: LeafTree,
    colors: Optional[Iterable[int]] = None,
    out=None,
) -> str:
    """Deterministic DOT rendering; byte-identical across runs.

    Leaves are boxes labeled with their element id, and carry a color
    attribute when a color sequence (indexed by element id) is given.
    Writes to `out` when provided and always returns the text.
    """
    color_list = list(colors) if colors is not None else None
    leaf_of = t.leaf_map()
    lines = ["graph dset_tree {"]
    for u in t.nodes:
        if u in leaf_of:
            e = leaf_of[u]
            attrs = [f'label="e{e}"', "shape=box"]
            if color_list is not None:
                attrs.append(f'color_index="{color_list[e]}"')
            lines.append(f"  n{u} [{', '.join(attrs)}];")
        else:
            lines.append(f"  n{u} [shape=point];")
    for u, v in t.edges:
        lines.append(f"  n{u} -- n{v};")
    lines.append("}")
    text = "\n".join(lines) + "\n"
    if out is not None:
        out.write(text)
    return text
