"""Reply-graph and user-graph construction plus degree reports."""

from __future__ import annotations

import random

from threadmotifs.graphs import (
    build_reply_graph,
    build_user_graph,
    degree_sequences,
)
from threadmotifs.thread_model import ThreadRecord

from support import fig2_thread, make_thread, synth_corpus


def edge_names(g):
    return {(g.users[u], g.users[v]): t for (u, v), t in g.edges.items()}


class TestReplyGraph:
    def test_star(self):
        thread = make_thread(
            "t",
            "focus",
            [("p0", None, "a", 0), ("p1", "p0", "b", 1), ("p2", "p0", "c", 2)],
        )
        rg = build_reply_graph(thread)
        assert rg.n_posts == 3
        assert rg.n_edges == 2
        assert rg.parent_of == (None, 0, 0)
        assert rg.root == 0

    def test_chain(self):
        thread = make_thread(
            "t",
            "focus",
            [("p0", None, "a", 0), ("p1", "p0", "b", 1), ("p2", "p1", "c", 2)],
        )
        rg = build_reply_graph(thread)
        assert rg.parent_of == (None, 0, 1)

    def test_fig2_root_in_degree(self):
        rg = build_reply_graph(fig2_thread())
        report = degree_sequences(rg)
        assert report.in_degrees[rg.root] == 4

    def test_tree_invariants_on_random_corpora(self):
        for thread in synth_corpus(30, "focus", reply_back_prob=0.5, seed=3):
            rg = build_reply_graph(thread)
            assert rg.n_edges == rg.n_posts - 1
            assert sum(1 for p in rg.parent_of if p is None) == 1


class TestUserGraph:
    def test_single_interaction(self):
        thread = make_thread(
            "t", "focus", [("p0", None, "A", 0), ("p1", "p0", "B", 5)]
        )
        g = build_user_graph(thread)
        assert edge_names(g) == {("B", "A"): 5}
        assert g.users[g.anchor] == "A"

    def test_repeat_interaction_keeps_earliest_time(self):
        thread = make_thread(
            "t",
            "focus",
            [
                ("p0", None, "A", 0),
                ("p1", "p0", "B", 5),
                ("p2", "p0", "A", 7),
                ("p3", "p2", "B", 9),
            ],
        )
        g = build_user_graph(thread)
        assert edge_names(g) == {("B", "A"): 5}

    def test_self_replies_excluded(self):
        thread = make_thread(
            "t",
            "focus",
            [("p0", None, "A", 0), ("p1", "p0", "A", 1), ("p2", "p1", "B", 2)],
        )
        g = build_user_graph(thread)
        assert edge_names(g) == {("B", "A"): 2}

    def test_fig2_edges(self):
        g = build_user_graph(fig2_thread())
        assert g.n_users == 5
        assert set(edge_names(g)) == {
            ("blue", "red"),
            ("green", "red"),
            ("yellow", "red"),
            ("purple", "red"),
            ("red", "yellow"),
            ("red", "purple"),
        }

    def test_post_order_permutation_invariance(self):
        rng = random.Random(17)
        for thread in synth_corpus(20, "focus", reply_back_prob=0.5, seed=23):
            base = edge_names(build_user_graph(thread))
            posts = list(thread.posts)
            rng.shuffle(posts)
            shuffled = ThreadRecord(thread.thread_id, thread.source, tuple(posts))
            assert edge_names(build_user_graph(shuffled)) == base

    def test_matches_reply_graph_author_pairs(self):
        # Collapsing the reply tree onto authors (dropping self-pairs and
        # keeping earliest duplicates) must reproduce the user graph.
        for thread in synth_corpus(20, "baseline", reply_back_prob=0.3, seed=29):
            by_id = {p.id: p for p in thread.posts}
            expected = {}
            for post in thread.posts:
                if post.parent is None:
                    continue
                pair = (post.author, by_id[post.parent].author)
                if pair[0] == pair[1]:
                    continue
                if pair not in expected or post.t < expected[pair]:
                    expected[pair] = post.t
            assert edge_names(build_user_graph(thread)) == expected


class TestDegreeSequences:
    def test_single_author_thread(self):
        thread = make_thread(
            "t", "focus", [("p0", None, "A", 0), ("p1", "p0", "A", 1)]
        )
        report = degree_sequences(build_user_graph(thread))
        assert report.kind == "user"
        assert report.in_histogram() == {0: 1}
        assert report.out_histogram() == {0: 1}

    def test_star_reply_tree(self):
        k = 5
        posts = [("p0", None, "a", 0)] + [
            (f"p{i}", "p0", f"u{i}", i) for i in range(1, k + 1)
        ]
        report = degree_sequences(build_reply_graph(make_thread("t", "focus", posts)))
        assert report.in_degrees[0] == k
        assert report.out_degrees[0] == 0
        assert set(report.out_degrees[1:]) == {1}
        assert report.in_histogram() == {0: k, k: 1}

    def test_fig2_anchor_degrees(self):
        g = build_user_graph(fig2_thread())
        report = degree_sequences(g)
        assert report.in_degrees[g.anchor] == 4
        assert report.out_degrees[g.anchor] == 2

    def test_degree_sums_equal_edge_count(self):
        for thread in synth_corpus(15, "focus", reply_back_prob=0.6, seed=31):
            g = build_user_graph(thread)
            report = degree_sequences(g)
            assert sum(report.in_degrees) == g.n_edges
            assert sum(report.out_degrees) == g.n_edges
