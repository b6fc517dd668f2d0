"""Shared builders and independent oracles used across the test suite."""

from __future__ import annotations

import random
from collections import deque
from fractions import Fraction

from threadmotifs.graphs import UserGraph
from threadmotifs.thread_model import PostRecord, ThreadRecord


def make_thread(thread_id, source, posts) -> ThreadRecord:
    """Build a thread from (id, parent, author, t) tuples."""
    return ThreadRecord(thread_id, source, tuple(PostRecord(*p) for p in posts))


def fig2_thread() -> ThreadRecord:
    """The 8-post, 5-user example thread: four users reply to the root
    author, who replies back to two of them."""
    return make_thread(
        "fig2",
        "focus",
        [
            ("p1", None, "red", 0),
            ("p2", "p1", "blue", 10),
            ("p3", "p1", "green", 20),
            ("p4", "p1", "yellow", 30),
            ("p5", "p1", "purple", 40),
            ("p6", "p4", "red", 50),
            ("p7", "p5", "red", 60),
            ("p8", "p6", "yellow", 70),
        ],
    )


def graph_from_names(users, anchor, edges) -> UserGraph:
    """UserGraph from user names and {(src, dst): first_t} (or a pair list)."""
    index = {name: i for i, name in enumerate(users)}
    if not isinstance(edges, dict):
        edges = {pair: 0 for pair in edges}
    return UserGraph(
        users=tuple(users),
        anchor=index[anchor],
        edges={(index[u], index[v]): t for (u, v), t in edges.items()},
    )


def random_user_graph(rng: random.Random, n: int, density: float, anchor=None) -> UserGraph:
    """Random simple digraph with random edge timestamps."""
    edges = {}
    for u in range(n):
        for v in range(n):
            if u != v and rng.random() < density:
                edges[(u, v)] = rng.randint(0, 1_000_000)
    return UserGraph(
        users=tuple(f"n{i}" for i in range(n)),
        anchor=rng.randrange(n) if anchor is None else anchor,
        edges=edges,
    )


def _bfs_dist(succ, source):
    dist = [-1] * len(succ)
    dist[source] = 0
    queue = deque([source])
    while queue:
        u = queue.popleft()
        for v in succ[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                queue.append(v)
    return dist


def betweenness_oracle(g: UserGraph) -> float:
    """Anchor betweenness by explicitly enumerating every shortest path.

    Independent of the production path-counting: lists all distance-
    increasing paths per ordered pair and checks anchor membership.
    Only meant for small graphs.
    """
    n = g.n_users
    anchor = g.anchor
    succ = g.successor_lists()
    total = Fraction(0)
    for s in range(n):
        if s == anchor:
            continue
        dist = _bfs_dist(succ, s)
        for t in range(n):
            if t in (s, anchor) or dist[t] < 0:
                continue
            paths = []

            def extend(u, path):
                if u == t:
                    paths.append(path)
                    return
                for v in succ[u]:
                    if dist[v] == dist[u] + 1 and dist[v] <= dist[t]:
                        extend(v, path + [v])

            extend(s, [s])
            through = sum(1 for path in paths if anchor in path)
            total += Fraction(through, len(paths))
    return float(total)


def synth_corpus(n_threads, source, reply_back_prob, seed=20240301):
    """Synthetic corpora for planted-signal tests.

    Each thread: a root by "op", then replies by a user pool that land on
    the root 30% of the time and on a random earlier post otherwise, then
    the op replies back to each distinct user who answered an op post, with
    the given probability. The organic part is seeded per thread index only,
    so two corpora built with different reply-back probabilities share their
    organic structure exactly.
    """
    threads = []
    for i in range(n_threads):
        rng = random.Random(f"{seed}:{i}")
        pool = [f"u{j}" for j in range(rng.randint(3, 34))]
        n_replies = rng.randint(2 * len(pool), 4 * len(pool))
        posts = [("p0", None, "op", 0)]
        for j in range(1, n_replies + 1):
            parent_id = "p0" if rng.random() < 0.3 else rng.choice(posts)[0]
            posts.append((f"p{j}", parent_id, rng.choice(pool), j))
        author_of = {p[0]: p[2] for p in posts}
        t = n_replies + 1
        responded = set()
        extras = []
        for pid, parent, author, _ in posts[1:]:
            if author_of[parent] == "op" and author not in responded:
                responded.add(author)
                if rng.random() < reply_back_prob:
                    extras.append((f"r{len(extras)}", pid, "op", t))
                    t += 1
        posts.extend(extras)
        threads.append(make_thread(f"{source}-{i}", source, posts))
    return threads
