"""Anchored triadic motif classes, census algorithms, and completion timing.

A triad (anchor, v, w) in a user graph is described by three dyad codes:
(dyad(anchor, v), dyad(anchor, w), dyad(v, w)), each one of

    N  no edge        O  first -> second only
    I  second -> first only        M  both directions

Exchanging v and w maps (d1, d2, d3) to (d2, d1, flip(d3)), so the 64
labeled configurations collapse into 36 classes: 8 swap-fixed singletons
and 28 two-config orbits. Each class is named by the Holland-Leinhardt
type of its underlying unanchored triad (mutual/asymmetric/null dyad
counts plus a C/U/D/T modifier) and, where the anchor position splits a
type into several variants, a trailing letter a/b/c.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterator, Mapping

from .errors import InvalidLifetimeError, InvalidPairError, UndefinedMetricError
from .graphs import UserGraph

DYAD_CODES = ("N", "O", "I", "M")
_CODE_ORDER = {"N": 0, "O": 1, "I": 2, "M": 3}
_FLIP = {"N": "N", "O": "I", "I": "O", "M": "M"}

TriadConfig = tuple[str, str, str]

# Holland-Leinhardt triad types in their conventional order; class columns
# follow this order, then the variant letter.
BASE_TYPES = (
    "003", "012", "102", "021D", "021U", "021C", "111D", "111U",
    "030T", "030C", "201", "120D", "120U", "120C", "210", "300",
)

# Fixed letter assignments, applied before the deterministic sweep: the
# variants where every arrowhead meets at the anchor, and the lone-edge
# variant pointing into the anchor. Keys are canonical orbit representatives.
_PINNED_LETTERS: dict[TriadConfig, str] = {
    ("I", "I", "N"): "a",  # 021U: anchor receives from both peers
    ("M", "M", "N"): "b",  # 201: anchor centers two mutual dyads
    ("I", "M", "N"): "b",  # 111D: anchor holds the mutual and takes the extra edge
    ("N", "I", "N"): "b",  # 012: the single edge points into the anchor
}


def flip_dyad(code: str) -> str:
    """The same dyad viewed from the other endpoint."""
    return _FLIP[code]


def swap_config(config: TriadConfig) -> TriadConfig:
    """The same triad with the two non-anchor nodes exchanged."""
    d1, d2, d3 = config
    return (d2, d1, _FLIP[d3])


def _config_key(config: TriadConfig) -> tuple[int, int, int]:
    return tuple(_CODE_ORDER[d] for d in config)  # type: ignore[return-value]


def dyad_code(g: UserGraph, x: int, y: int) -> str:
    """Dyad state of the ordered pair (x, y)."""
    if x == y:
        raise InvalidPairError("dyad of a node with itself is undefined")
    fwd = (x, y) in g.edges
    bwd = (y, x) in g.edges
    if fwd and bwd:
        return "M"
    if fwd:
        return "O"
    if bwd:
        return "I"
    return "N"


def _triad_edges(config: TriadConfig) -> list[tuple[int, int]]:
    """Directed edges of the 3-node triad (0 = anchor, 1 = v, 2 = w)."""
    edges = []
    for (a, b), code in zip(((0, 1), (0, 2), (1, 2)), config):
        if code in ("O", "M"):
            edges.append((a, b))
        if code in ("I", "M"):
            edges.append((b, a))
    return edges


def base_type_name(config: TriadConfig) -> str:
    """Holland-Leinhardt type of the unanchored triad underlying a config."""
    m = sum(1 for d in config if d == "M")
    a = sum(1 for d in config if d in ("O", "I"))
    base = f"{m}{a}{3 - m - a}"
    if base not in ("021", "030", "111", "120"):
        return base
    edges = set(_triad_edges(config))
    asym = [(s, t) for s, t in sorted(edges) if (t, s) not in edges]
    if base == "030":
        out_counts = [sum(1 for s, _ in asym if s == node) for node in range(3)]
        return "030C" if all(c == 1 for c in out_counts) else "030T"
    if base == "111":
        mutual_pair = next(
            pair for pair, d in zip(((0, 1), (0, 2), (1, 2)), config) if d == "M"
        )
        (_, target), = asym
        return "111D" if target in mutual_pair else "111U"
    (s1, t1), (s2, t2) = asym
    if s1 == s2:
        return base + "D"
    if t1 == t2:
        return base + "U"
    return base + "C"


@dataclass(frozen=True)
class AnchoredTriadClass:
    """One of the 36 anchored triad classes."""

    index: int
    name: str
    base: str
    configs: tuple[TriadConfig, ...]  # 1 or 2 members, canonical first
    man_counts: tuple[int, int, int]  # (mutual, asymmetric, null) dyads

    @property
    def has_edges(self) -> bool:
        return self.man_counts[0] + self.man_counts[1] > 0


@dataclass(frozen=True)
class ClassTable:
    """Total mapping from all 64 triad configs to the 36 anchored classes."""

    classes: tuple[AnchoredTriadClass, ...]
    _index_of: Mapping[TriadConfig, int]
    _name_index: Mapping[str, int]

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(c.name for c in self.classes)

    def index_of(self, config: TriadConfig) -> int:
        return self._index_of[config]

    def class_of(self, config: TriadConfig) -> AnchoredTriadClass:
        return self.classes[self._index_of[config]]

    def named(self, name: str) -> AnchoredTriadClass:
        try:
            return self.classes[self._name_index[name]]
        except KeyError:
            raise KeyError(f"unknown anchored triad class {name!r}") from None


def build_class_table() -> ClassTable:
    """Enumerate the 64 configs, group swap orbits, and name the 36 classes.

    The canonical orbit representative is the lexicographic minimum under
    N < O < I < M. Within each base type, pinned letters are honored first
    and the remaining variants take the remaining letters in ascending
    canonical-config order; single-variant types carry no letter.
    """
    orbits: list[tuple[TriadConfig, ...]] = []
    seen: set[TriadConfig] = set()
    for config in itertools.product(DYAD_CODES, repeat=3):
        if config in seen:
            continue
        mirror = swap_config(config)
        members = tuple(sorted({config, mirror}, key=_config_key))
        seen.update(members)
        orbits.append(members)

    by_base: dict[str, list[tuple[TriadConfig, ...]]] = {b: [] for b in BASE_TYPES}
    for members in orbits:
        by_base[base_type_name(members[0])].append(members)

    classes: list[AnchoredTriadClass] = []
    index_of: dict[TriadConfig, int] = {}
    name_index: dict[str, int] = {}
    for base in BASE_TYPES:
        group = sorted(by_base[base], key=lambda mem: _config_key(mem[0]))
        if len(group) == 1:
            named_group = [(base, group[0])]
        else:
            letters = list("abc"[: len(group)])
            assigned: dict[tuple[TriadConfig, ...], str] = {}
            for members in group:
                pin = _PINNED_LETTERS.get(members[0])
                if pin is not None:
                    assigned[members] = pin
                    letters.remove(pin)
            for members in group:
                if members not in assigned:
                    assigned[members] = letters.pop(0)
            named_group = sorted(
                ((f"{base}-{letter}", members) for members, letter in assigned.items()),
                key=lambda item: item[0],
            )
        for name, members in named_group:
            canonical = members[0]
            man = (
                sum(1 for d in canonical if d == "M"),
                sum(1 for d in canonical if d in ("O", "I")),
                sum(1 for d in canonical if d == "N"),
            )
            cls = AnchoredTriadClass(
                index=len(classes),
                name=name,
                base=base,
                configs=members,
                man_counts=man,
            )
            name_index[name] = cls.index
            for member in members:
                index_of[member] = cls.index
            classes.append(cls)
    return ClassTable(tuple(classes), index_of, name_index)


@lru_cache(maxsize=1)
def get_class_table() -> ClassTable:
    """Shared, lazily built class table; treat as immutable."""
    return build_class_table()


def classify(config: TriadConfig, table: ClassTable) -> AnchoredTriadClass:
    """The unique class containing a config; swap-images classify identically."""
    return table.class_of(config)


@dataclass(frozen=True)
class MotifCensus:
    """Counts of the 36 anchored classes over one user graph."""

    counts: tuple[int, ...]
    n_users: int

    @property
    def total(self) -> int:
        return sum(self.counts)


def _non_anchor_pairs(g: UserGraph) -> Iterator[tuple[int, int]]:
    others = [u for u in range(g.n_users) if u != g.anchor]
    return itertools.combinations(others, 2)


def census_naive(g: UserGraph, table: ClassTable) -> MotifCensus:
    """Reference census: classify every non-anchor pair directly."""
    counts = [0] * len(table.classes)
    anchor = g.anchor
    for v, w in _non_anchor_pairs(g):
        config = (dyad_code(g, anchor, v), dyad_code(g, anchor, w), dyad_code(g, v, w))
        counts[table.index_of(config)] += 1
    return MotifCensus(tuple(counts), g.n_users)


def census_fast(g: UserGraph, table: ClassTable) -> MotifCensus:
    """Census in O(nodes + edges): anchor-dyad tallies plus a subtraction pass.

    Tally how many peers sit at each dyad code from the anchor; closed-form
    pair counts cover every class whose peer dyad is N. One pass over edges
    between non-anchor nodes then moves each actually connected pair from
    its assumed-N class to its true class (mutual pairs visited once).
    Output is identical to census_naive on every input.
    """
    anchor = g.anchor
    n = g.n_users
    counts = [0] * len(table.classes)
    code_of: dict[int, str] = {}
    tally = {code: 0 for code in DYAD_CODES}
    for u in range(n):
        if u == anchor:
            continue
        code = dyad_code(g, anchor, u)
        code_of[u] = code
        tally[code] += 1
    for c1, c2 in itertools.combinations_with_replacement(DYAD_CODES, 2):
        if c1 == c2:
            pairs = tally[c1] * (tally[c1] - 1) // 2
        else:
            pairs = tally[c1] * tally[c2]
        if pairs:
            counts[table.index_of((c1, c2, "N"))] += pairs
    done: set[tuple[int, int]] = set()
    for u, v in g.edges:
        if u == anchor or v == anchor:
            continue
        pair = (u, v) if u < v else (v, u)
        if pair in done:
            continue
        done.add(pair)
        a, b = pair
        d3 = dyad_code(g, a, b)
        counts[table.index_of((code_of[a], code_of[b], "N"))] -= 1
        counts[table.index_of((code_of[a], code_of[b], d3))] += 1
    return MotifCensus(tuple(counts), n)


def motif_instances(g: UserGraph, cls: AnchoredTriadClass) -> list[tuple[int, int]]:
    """All non-anchor pairs {v, w} whose triad with the anchor is in cls."""
    members = set(cls.configs)
    anchor = g.anchor
    found = []
    for v, w in _non_anchor_pairs(g):
        config = (dyad_code(g, anchor, v), dyad_code(g, anchor, w), dyad_code(g, v, w))
        if config in members:
            found.append((v, w))
    return found


def completion_fractions(
    g: UserGraph, cls: AnchoredTriadClass, t0: int, t1: int
) -> list[float]:
    """Normalized age of each instance's last-established edge.

    For every instance of cls, takes the maximum first-seen timestamp over
    the instance's present directed edges and maps it onto [0, 1] across the
    lifetime [t0, t1] (clamped; 0 everywhere when t1 == t0).
    """
    if not cls.has_edges:
        raise UndefinedMetricError(
            f"class {cls.name} has no edges, completion time is undefined"
        )
    if t1 < t0:
        raise InvalidLifetimeError(f"lifetime ends before it starts ({t1} < {t0})")
    anchor = g.anchor
    span = t1 - t0
    fractions = []
    for v, w in motif_instances(g, cls):
        candidates = (
            (anchor, v), (v, anchor), (anchor, w), (w, anchor), (v, w), (w, v),
        )
        completion = max(g.edges[e] for e in candidates if e in g.edges)
        if span == 0:
            fractions.append(0.0)
        else:
            fractions.append(min(1.0, max(0.0, (completion - t0) / span)))
    return fractions
