"""Graph abstractions built from a single thread.

Two views of the same conversation: the reply tree over posts, and the
user interaction graph over distinct authors. Edges point from the
replier toward the post/user being replied to, so a node's in-degree
counts the replies it received.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

from .thread_model import ThreadRecord


@dataclass(frozen=True)
class ReplyGraph:
    """Tree of posts; each non-root post has one edge to its parent."""

    post_ids: tuple[str, ...]
    timestamps: tuple[int, ...]
    parent_of: tuple[int | None, ...]
    root: int

    @property
    def n_posts(self) -> int:
        return len(self.post_ids)

    @property
    def n_edges(self) -> int:
        return len(self.post_ids) - 1


@dataclass(frozen=True)
class UserGraph:
    """Simple directed graph of users, one distinguished anchor (the OP).

    ``edges`` maps (responder, responded-to) index pairs to the earliest
    timestamp at which that directed relation appeared. No self-loops;
    at most one edge per ordered pair.
    """

    users: tuple[str, ...]
    anchor: int
    edges: dict[tuple[int, int], int]

    @property
    def n_users(self) -> int:
        return len(self.users)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (u, v) in self.edges

    def successor_lists(self) -> list[list[int]]:
        succ: list[list[int]] = [[] for _ in range(self.n_users)]
        for u, v in self.edges:
            succ[u].append(v)
        for lst in succ:
            lst.sort()
        return succ


@dataclass(frozen=True)
class DegreeReport:
    """Per-node in/out degrees for one graph, plus degree histograms."""

    kind: str  # "user" | "reply"
    nodes: tuple[str, ...]
    in_degrees: tuple[int, ...]
    out_degrees: tuple[int, ...]

    def in_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.in_degrees).items()))

    def out_histogram(self) -> dict[int, int]:
        return dict(sorted(Counter(self.out_degrees).items()))


def build_reply_graph(thread: ThreadRecord) -> ReplyGraph:
    """One node per post, one edge from each reply to the post it answers."""
    index = {p.id: i for i, p in enumerate(thread.posts)}
    parent_of = tuple(
        None if p.parent is None else index[p.parent] for p in thread.posts
    )
    root = next(i for i, p in enumerate(thread.posts) if p.parent is None)
    return ReplyGraph(
        post_ids=tuple(p.id for p in thread.posts),
        timestamps=tuple(p.t for p in thread.posts),
        parent_of=parent_of,
        root=root,
    )


def build_user_graph(thread: ThreadRecord) -> UserGraph:
    """Collapse the reply tree onto authors.

    A reply by user u to a post authored by user v (u != v) contributes the
    edge u -> v; repeat interactions keep the earliest timestamp. Replies to
    one's own posts contribute nothing.
    """
    user_index: dict[str, int] = {}
    for post in thread.posts:
        user_index.setdefault(post.author, len(user_index))
    author_of = {p.id: p.author for p in thread.posts}
    edges: dict[tuple[int, int], int] = {}
    for post in thread.posts:
        if post.parent is None:
            continue
        u = user_index[post.author]
        v = user_index[author_of[post.parent]]
        if u == v:
            continue
        key = (u, v)
        if key not in edges or post.t < edges[key]:
            edges[key] = post.t
    return UserGraph(
        users=tuple(user_index),
        anchor=user_index[thread.root.author],
        edges=edges,
    )


def degree_sequences(graph: ReplyGraph | UserGraph) -> DegreeReport:
    """Exact in/out degree of every node."""
    if isinstance(graph, ReplyGraph):
        in_deg = [0] * graph.n_posts
        out_deg = [0] * graph.n_posts
        for child, parent in enumerate(graph.parent_of):
            if parent is not None:
                in_deg[parent] += 1
                out_deg[child] = 1
        return DegreeReport("reply", graph.post_ids, tuple(in_deg), tuple(out_deg))
    in_deg = [0] * graph.n_users
    out_deg = [0] * graph.n_users
    for u, v in graph.edges:
        out_deg[u] += 1
        in_deg[v] += 1
    return DegreeReport("user", graph.users, tuple(in_deg), tuple(out_deg))
