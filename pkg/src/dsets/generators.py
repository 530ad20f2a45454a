"""Named fixtures, exhaustive tree enumeration, and seeded families.

Everything here is deterministic: fixtures have stable ids (leaf node ids
equal element ids, internal ids counted upward from the element count),
enumeration emits one canonically labeled representative per isomorphism
class, and random kinds are pure functions of their seed.
"""

from __future__ import annotations

import itertools
import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Optional

from .core import DSet, InputError
from .splittings import enumerate_splittings
from .trees import LeafTree, _centers, canonical_form, d_from_tree

__all__ = [
    "Fixture",
    "TreeSpec",
    "gen_fixture",
    "fixture_names",
    "enum_trees",
    "gen_random",
    "color_uniform",
    "color_round_robin",
    "color_sector_avoiding",
]

ENUM_LEAF_CAP = 8


@dataclass(frozen=True)
class Fixture:
    """A named tree together with its leaf relation."""

    name: str
    tree: LeafTree
    dset: DSet
    description: str


def _flower(k: int) -> LeafTree:
    center = k
    return LeafTree(
        range(k + 1),
        [(i, center) for i in range(k)],
        {i: i for i in range(k)},
    )


def _spine_tree(loads: list[list[int]]) -> LeafTree:
    """Caterpillar-style builder: loads[i] = elements at spine node i."""
    n = sum(len(g) for g in loads)
    spine = [n + i for i in range(len(loads))]
    nodes = list(range(n)) + spine
    edges = [(spine[i], spine[i + 1]) for i in range(len(spine) - 1)]
    for i, group in enumerate(loads):
        edges.extend((e, spine[i]) for e in group)
    return LeafTree(nodes, edges, {e: e for e in range(n)})


def _build_cat4() -> LeafTree:
    return _spine_tree([[0, 1], [2, 3]])


def _build_cat4e() -> LeafTree:
    # CAT4 with one more leaf e=4 on the first spine node.
    return _spine_tree([[0, 1, 4], [2, 3]])


def _build_cat4m() -> LeafTree:
    # CAT4 with the spine edge subdivided by a node carrying e=4.
    return _spine_tree([[0, 1], [4], [2, 3]])


def _build_cat5() -> LeafTree:
    return _spine_tree([[0, 1], [2], [3, 4]])


def _build_cat5x() -> LeafTree:
    # CAT5 with the first spine edge subdivided by a node carrying x=5.
    return _spine_tree([[0, 1], [5], [2], [3, 4]])


def _build_cat5y() -> LeafTree:
    # CAT5 with one more leaf y=5 beside a0, a1.
    return _spine_tree([[0, 1, 5], [2], [3, 4]])


def _build_cat5l() -> LeafTree:
    # A node before the spine carries y1=5, y2=6; each a_i sits one step
    # further right, so every sector reaching {y1, y2} meets the window in
    # an initial segment.
    return _spine_tree([[5, 6], [0], [1], [2], [3, 4]])


def _build_cat5r() -> LeafTree:
    # Mirror image of CAT5L: y1=5, y2=6 hang past the right end.
    return _spine_tree([[0, 1], [2], [3], [4], [5, 6]])


def _build_cat6() -> LeafTree:
    # Letter-named spine fixture a..e = 0..4; same shape as CAT5.
    return _spine_tree([[0, 1], [2], [3, 4]])


def _build_mix() -> LeafTree:
    # One degree-3 and one degree-4 internal node, so node splittings of
    # different sizes coexist and regularity fails.
    return _spine_tree([[0, 1], [2, 3, 4]])


_CATALOGUE: dict[str, tuple] = {
    "STAR4": (lambda: _flower(4), "star with 4 leaves"),
    "CAT4": (_build_cat4, "two spine nodes, two leaves each"),
    "CAT4E": (_build_cat4e, "CAT4 plus a fifth leaf on the first spine node"),
    "CAT4M": (_build_cat4m, "CAT4 with the spine edge subdivided, new node carrying a leaf"),
    "CAT5": (_build_cat5, "three spine nodes carrying 2+1+2 leaves"),
    "CAT5X": (_build_cat5x, "CAT5 with a subdividing node carrying leaf x=5"),
    "CAT5Y": (_build_cat5y, "CAT5 with an extra leaf y=5 on the first spine node"),
    "CAT5L": (_build_cat5l, "caterpillar with a two-leaf node past the left end"),
    "CAT5R": (_build_cat5r, "caterpillar with a two-leaf node past the right end"),
    "CAT6": (_build_cat6, "letter-named 2+1+2 caterpillar"),
    "MIX": (_build_mix, "degree-3 and degree-4 spine nodes side by side"),
}

_FLW_RE = re.compile(r"^FLW(\d+)$")


def fixture_names() -> list[str]:
    return sorted(_CATALOGUE) + ["FLWk (k >= 3)"]


def gen_fixture(name: str) -> Fixture:
    """Look up a named fixture; FLWk builds a k-leaf star on demand."""
    m = _FLW_RE.match(name)
    if m:
        k = int(m.group(1))
        if k < 3:
            raise InputError("a flower needs at least 3 leaves")
        if k > 64:
            raise InputError("flower size capped at 64")
        tree = _flower(k)
        return Fixture(name, tree, d_from_tree(tree), f"star with {k} leaves")
    if name not in _CATALOGUE:
        known = ", ".join(fixture_names())
        raise InputError(f"unknown fixture {name!r}; known: {known}")
    builder, description = _CATALOGUE[name]
    tree = builder()
    return Fixture(name, tree, d_from_tree(tree), description)


def _shape_key(t: LeafTree) -> tuple:
    return canonical_form(t, [0] * t.n_elements)


def _grown(t: LeafTree) -> Iterator[LeafTree]:
    """All ways to add one leaf: widen an internal node or split an edge."""
    k = t.n_elements
    top = max(t.nodes)
    leaf_map = dict(t.leaves)
    for u in t.internal_nodes():
        nodes = list(t.nodes) + [top + 1]
        edges = list(t.edges) + [(u, top + 1)]
        yield LeafTree(nodes, edges, {**leaf_map, top + 1: k})
    for u, v in t.edges:
        mid, tip = top + 1, top + 2
        edges = [e for e in t.edges if e != (u, v)]
        edges += [(u, mid), (mid, v), (mid, tip)]
        yield LeafTree(list(t.nodes) + [mid, tip], edges, {**leaf_map, tip: k})


@lru_cache(maxsize=None)
def _shapes(leaves: int) -> tuple[LeafTree, ...]:
    if leaves == 1:
        return (LeafTree([0], [], {0: 0}),)
    if leaves == 2:
        return (LeafTree([0, 1], [(0, 1)], {0: 0, 1: 1}),)
    found: dict[tuple, LeafTree] = {}
    for smaller in _shapes(leaves - 1):
        for candidate in _grown(smaller):
            key = _shape_key(candidate)
            if key not in found:
                found[key] = candidate
    return tuple(
        _canonical_relabel(found[key]) for key in sorted(found)
    )


def enum_trees(leaves: int, allow_large: bool = False) -> Iterator[LeafTree]:
    """One canonically labeled tree per isomorphism class with that many leaves.

    Internal nodes all have degree at least three, so the count grows fast;
    past 8 leaves the cap must be lifted explicitly.
    """
    if leaves < 1:
        raise InputError("leaf count must be positive")
    if leaves > ENUM_LEAF_CAP and not allow_large:
        raise InputError(
            f"enumeration beyond {ENUM_LEAF_CAP} leaves needs allow_large=True"
        )
    yield from _shapes(leaves)


def _canonical_relabel(t: LeafTree) -> LeafTree:
    """Rename nodes by a center-rooted canonical traversal.

    Leaves take 0..k-1 in visit order and double as their own node ids;
    internal nodes continue from k.
    """
    adj = t.adjacency()
    labeled = set(t.leaf_map())
    memo: dict[tuple[int, Optional[int]], tuple] = {}

    def code(u: int, parent: Optional[int]) -> tuple:
        key = (u, parent)
        if key not in memo:
            kids = sorted(code(v, u) for v in adj[u] if v != parent)
            memo[key] = ("leaf" if u in labeled else "node", tuple(kids))
        return memo[key]

    centers = _centers(adj)
    root = min(centers, key=lambda c: (code(c, None), c))

    k = t.n_elements
    next_leaf = itertools.count(0)
    next_internal = itertools.count(k)
    mapping: dict[int, int] = {}

    def walk(u: int, parent: Optional[int]) -> None:
        mapping[u] = next(next_leaf) if u in labeled else next(next_internal)
        for v in sorted(
            (v for v in adj[u] if v != parent), key=lambda v: (code(v, u), v)
        ):
            walk(v, u)

    walk(root, None)
    return LeafTree(
        sorted(mapping.values()),
        [(mapping[u], mapping[v]) for u, v in t.edges],
        {mapping[u]: mapping[u] for u in labeled},
    )


@dataclass(frozen=True)
class TreeSpec:
    """Parameters of one generated tree."""

    kind: str
    leaves: int
    degree: Optional[int] = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("star", "caterpillar", "d_regular_random", "enumerated"):
            raise InputError(f"unknown tree kind {self.kind!r}")
        if self.leaves < 1:
            raise InputError("leaf count must be positive")


def _caterpillar(leaves: int) -> LeafTree:
    if leaves == 3:
        return _flower(3)
    loads = [[0, 1]] + [[i + 1] for i in range(1, leaves - 3)] + [[leaves - 2, leaves - 1]]
    return _spine_tree(loads)


def _d_regular(leaves: int, degree: int, rng: random.Random) -> LeafTree:
    if degree < 3:
        raise InputError("regular degree must be at least 3")
    if leaves < degree or (leaves - 2) % (degree - 2) != 0:
        raise InputError(
            f"no {degree}-regular tree exists with {leaves} leaves"
        )
    j = (leaves - 2) // (degree - 2)
    if j == 1:
        return _flower(leaves)
    # Random internal skeleton, capped at the target degree; the leaf count
    # at each node is then forced.
    deg = [0] * j
    skeleton: list[tuple[int, int]] = []
    for i in range(1, j):
        parent = rng.choice([u for u in range(i) if deg[u] < degree])
        skeleton.append((parent, i))
        deg[parent] += 1
        deg[i] += 1
    loads: list[list[int]] = []
    next_elem = 0
    for u in range(j):
        count = degree - deg[u]
        loads.append(list(range(next_elem, next_elem + count)))
        next_elem += count
    internal = [leaves + u for u in range(j)]
    nodes = list(range(leaves)) + internal
    edges = [(internal[u], internal[v]) for u, v in skeleton]
    for u, group in enumerate(loads):
        edges.extend((e, internal[u]) for e in group)
    return LeafTree(nodes, edges, {e: e for e in range(leaves)})


def gen_random(spec: TreeSpec, seed: Optional[int] = None) -> LeafTree:
    """Build the tree a spec describes, deterministically under its seed."""
    rng = random.Random(spec.seed if seed is None else seed)
    if spec.kind == "star":
        if spec.leaves < 3:
            raise InputError("a star needs at least 3 leaves")
        return _flower(spec.leaves)
    if spec.kind == "caterpillar":
        if spec.leaves < 3:
            raise InputError("a caterpillar needs at least 3 leaves")
        return _caterpillar(spec.leaves)
    if spec.kind == "d_regular_random":
        if spec.degree is None:
            raise InputError("d_regular_random needs a degree")
        return _d_regular(spec.leaves, spec.degree, rng)
    shapes = list(enum_trees(spec.leaves))
    return shapes[rng.randrange(len(shapes))]


def color_uniform(d: DSet) -> DSet:
    return d.recolor([0] * d.n)


def color_round_robin(d: DSet, n_colors: int) -> DSet:
    if n_colors < 1:
        raise InputError("need at least one color")
    return d.recolor([i % n_colors for i in range(d.n)])


def color_sector_avoiding(d: DSet) -> DSet:
    """Two-coloring that starves one whole sector of color 1.

    The first non-singleton sector of the canonically first splitting is
    painted 0 throughout, the least element outside it becomes the only
    color-1 element; a homogeneity color-hitting check then fails at that
    sector.
    """
    if d.n < 2:
        raise InputError("nothing to starve in a one-element D-set")
    for splitting in enumerate_splittings(d):
        for sec in splitting.sectors:
            if len(sec) < 2:
                continue
            outside = sorted(d.elements - sec)
            if not outside:
                continue
            colors = [0] * d.n
            colors[outside[0]] = 1
            return d.recolor(colors)
    raise InputError("no splitting offers a sector worth starving")
