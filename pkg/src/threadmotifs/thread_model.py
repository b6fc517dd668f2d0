"""Parse, validate, and filter corpora of threaded conversations.

A corpus is line-delimited JSON, one thread per line:

    {"thread_id": "t1", "source": "focus", "posts": [
        {"id": "p0", "parent": null, "author": "alice", "t": 1500000000},
        {"id": "p1", "parent": "p0", "author": "bob",   "t": 1500000060}]}

Exactly one post per thread has ``parent: null`` (the root post); every
other post's parent must name another post in the same thread, and the
parent links must form a tree. Timestamps are integer Unix seconds and
are not required to be monotone along parent links.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator

from .errors import CorpusParseError, ThreadValidationError

SOURCES = ("focus", "baseline")
DELETED_SENTINEL = "[deleted]"


@dataclass(frozen=True)
class PostRecord:
    """One post: the root when ``parent`` is None, otherwise a reply."""

    id: str
    parent: str | None
    author: str
    t: int


@dataclass(frozen=True)
class ThreadRecord:
    """A whole conversation thread; immutable once constructed."""

    thread_id: str
    source: str
    posts: tuple[PostRecord, ...]

    @property
    def root(self) -> PostRecord:
        return next(p for p in self.posts if p.parent is None)

    @property
    def n_posts(self) -> int:
        return len(self.posts)


@dataclass(frozen=True)
class FilterPolicy:
    """Corpus-level thread filter: minimum size and deleted-root removal."""

    min_extra_posts: int = 5
    drop_deleted_root: bool = True
    deleted_sentinel: str = DELETED_SENTINEL

    def __post_init__(self):
        if self.min_extra_posts < 0:
            raise ValueError("min_extra_posts must be non-negative")


def validate_thread(thread: ThreadRecord) -> None:
    """Raise ThreadValidationError unless the posts form a valid reply tree."""
    if not thread.posts:
        raise ThreadValidationError(thread.thread_id, "thread has no posts")
    by_id: dict[str, PostRecord] = {}
    roots = []
    for post in thread.posts:
        if not post.id:
            raise ThreadValidationError(thread.thread_id, "empty post id")
        if post.id in by_id:
            raise ThreadValidationError(
                thread.thread_id, f"duplicate post id {post.id!r}"
            )
        by_id[post.id] = post
        if post.parent is None:
            roots.append(post.id)
    if len(roots) != 1:
        raise ThreadValidationError(
            thread.thread_id, f"expected exactly one root post, found {len(roots)}"
        )
    children: dict[str, list[str]] = {p.id: [] for p in thread.posts}
    for post in thread.posts:
        if post.parent is None:
            continue
        if post.parent not in by_id:
            raise ThreadValidationError(
                thread.thread_id,
                f"post {post.id!r} replies to unknown parent {post.parent!r}",
            )
        children[post.parent].append(post.id)
    # Every post must be reachable from the root, else the parent links cycle.
    reached = 0
    stack = [roots[0]]
    while stack:
        reached += 1
        stack.extend(children[stack.pop()])
    if reached != len(thread.posts):
        raise ThreadValidationError(thread.thread_id, "parent links contain a cycle")


def _require(condition: bool, line_no: int, message: str) -> None:
    if not condition:
        raise CorpusParseError(line_no, message)


def parse_thread_line(line: str, line_no: int = 1) -> ThreadRecord:
    """Parse and validate a single corpus line."""
    try:
        obj = json.loads(line)
    except json.JSONDecodeError as err:
        raise CorpusParseError(line_no, f"invalid JSON ({err.msg})") from err
    _require(isinstance(obj, dict), line_no, "thread must be a JSON object")
    thread_id = obj.get("thread_id")
    _require(
        isinstance(thread_id, str) and bool(thread_id),
        line_no,
        "missing or empty 'thread_id'",
    )
    source = obj.get("source")
    _require(source in SOURCES, line_no, f"'source' must be one of {SOURCES}")
    raw_posts = obj.get("posts")
    _require(isinstance(raw_posts, list), line_no, "'posts' must be an array")
    posts = []
    for raw in raw_posts:
        _require(isinstance(raw, dict), line_no, "each post must be a JSON object")
        pid, parent, author, t = (
            raw.get("id"),
            raw.get("parent"),
            raw.get("author"),
            raw.get("t"),
        )
        _require(isinstance(pid, str) and bool(pid), line_no, "post 'id' must be a non-empty string")
        _require(
            parent is None or isinstance(parent, str),
            line_no,
            f"post {pid!r}: 'parent' must be a string or null",
        )
        _require(isinstance(author, str), line_no, f"post {pid!r}: 'author' must be a string")
        _require(
            isinstance(t, int) and not isinstance(t, bool),
            line_no,
            f"post {pid!r}: 't' must be an integer",
        )
        posts.append(PostRecord(id=pid, parent=parent, author=author, t=t))
    thread = ThreadRecord(thread_id=thread_id, source=source, posts=tuple(posts))
    validate_thread(thread)
    return thread


def parse_corpus(
    lines: Iterable[str],
    on_error: Callable[[CorpusParseError | ThreadValidationError], None] | None = None,
) -> Iterator[ThreadRecord]:
    """Yield every well-formed thread from a line-delimited corpus dump.

    Blank lines are skipped. When ``on_error`` is given, each malformed line
    or invalid thread is reported to it and parsing continues; when it is
    None the first error is raised.
    """
    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            yield parse_thread_line(line, line_no)
        except (CorpusParseError, ThreadValidationError) as err:
            if on_error is None:
                raise
            on_error(err)


def to_json_line(thread: ThreadRecord) -> str:
    """Serialize a thread back to its one-line corpus form."""
    return json.dumps(
        {
            "thread_id": thread.thread_id,
            "source": thread.source,
            "posts": [
                {"id": p.id, "parent": p.parent, "author": p.author, "t": p.t}
                for p in thread.posts
            ],
        }
    )


def filter_corpus(
    threads: Iterable[ThreadRecord], policy: FilterPolicy
) -> list[ThreadRecord]:
    """Keep threads with enough replies and (optionally) a surviving root author.

    A thread is retained when it has at least ``min_extra_posts`` posts in
    addition to the root, and its root author is not the deleted sentinel
    (unless ``drop_deleted_root`` is off). Order is preserved.
    """
    kept = []
    for thread in threads:
        if len(thread.posts) - 1 < policy.min_extra_posts:
            continue
        if policy.drop_deleted_root and thread.root.author == policy.deleted_sentinel:
            continue
        kept.append(thread)
    return kept


def thread_lifetime(thread: ThreadRecord) -> tuple[int, int]:
    """(root post timestamp, maximum timestamp over all posts)."""
    return thread.root.t, max(p.t for p in thread.posts)
