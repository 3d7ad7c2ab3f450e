"""Reply-cascade trees and their per-conversation metrics.

A conversation is a rooted tree: the root is the originating post, and each
other node is a reply, retweet, or quote attached to the node it references.
Three metrics summarize a tree:

* volume — number of non-root nodes.
* wiener_index — mean shortest-path distance over all ordered node pairs;
  near 2 for star-shaped broadcast trees, growing with chain-like depth.
* responsiveness — mean of inverse reply delays, in tweets per second.

``build_forest`` assembles trees from flat records; ``metric_series`` turns
a forest into a binned series keyed by each root's creation time.
"""

from __future__ import annotations

import csv
from collections import defaultdict, deque
from dataclasses import dataclass

import numpy as np

from .errors import InputError
from .series import TimeSeries, binned_mean

TWEET_COLUMNS = (
    "id",
    "parent_id",
    "root_id",
    "created_at",
    "author_id",
    "follower_count",
    "language",
    "polarity",
)

ORPHAN_POLICIES = ("drop", "promote")

METRICS = ("volume", "virality", "responsiveness")


@dataclass(slots=True)
class TweetRecord:
    """One post. parent_id is None for conversation roots."""

    id: str
    parent_id: str | None
    root_id: str | None
    created_at: int
    author_id: str
    follower_count: int
    language: str
    polarity: float

    def __post_init__(self):
        if not self.id:
            raise ValueError("id must be nonempty")
        if self.parent_id is not None and self.parent_id == self.id:
            raise ValueError(f"record {self.id}: parent_id equals id")
        if self.follower_count < 0:
            raise ValueError(f"record {self.id}: negative follower_count")
        if not -1.0 <= self.polarity <= 1.0:
            raise ValueError(f"record {self.id}: polarity outside [-1, 1]")


@dataclass
class CascadeTree:
    """Rooted reply tree; children maps node id -> child ids in input order."""

    root: TweetRecord
    children: dict[str, list[str]]
    nodes: dict[str, TweetRecord]

    @property
    def n_nodes(self) -> int:
        return len(self.nodes)


@dataclass
class ForestReport:
    """Build accounting for one dataset pass."""

    n_records: int = 0
    n_roots: int = 0
    n_orphans: int = 0
    n_edge_rejections: int = 0
    n_promoted: int = 0
    n_dropped: int = 0
    n_cycle_breaks: int = 0


def build_forest(
    records: list[TweetRecord], orphan_policy: str = "promote"
) -> tuple[list[CascadeTree], ForestReport]:
    """Assemble cascade trees from flat records in a single pass.

    Records with no parent_id are roots. A record whose parent_id is absent
    from the dataset is an orphan, dropped or promoted to a root per
    ``orphan_policy``. An edge whose child timestamp precedes its parent's is
    rejected and the child handled like an orphan. With the drop policy, a
    dropped node takes its entire unreachable subtree with it. The result is
    deterministic for a fixed input order.
    """
    if orphan_policy not in ORPHAN_POLICIES:
        raise ValueError(f"unknown orphan_policy: {orphan_policy!r}")
    if not records:
        raise InputError("no records")

    index: dict[str, TweetRecord] = {}
    position: dict[str, int] = {}
    for pos, rec in enumerate(records):
        if rec.id in index:
            raise InputError(f"duplicate id: {rec.id}")
        index[rec.id] = rec
        position[rec.id] = pos

    child_ids: dict[str, list[str]] = defaultdict(list)
    report = ForestReport(n_records=len(records))
    pending: deque[str] = deque()
    for rec in records:
        if rec.parent_id is None:
            report.n_roots += 1
            pending.append(rec.id)
        elif rec.parent_id not in index:
            report.n_orphans += 1
            if orphan_policy == "promote":
                report.n_promoted += 1
                pending.append(rec.id)
        else:
            child_ids[rec.parent_id].append(rec.id)

    trees: list[CascadeTree] = []
    visited: set[str] = set()

    def grow(root_id: str) -> None:
        root = index[root_id]
        tree = CascadeTree(root, defaultdict(list), {root_id: root})
        visited.add(root_id)
        queue = deque([root_id])
        while queue:
            cur = queue.popleft()
            cur_t = index[cur].created_at
            for cid in child_ids.get(cur, ()):
                child = index[cid]
                if child.created_at >= cur_t:
                    tree.children[cur].append(cid)
                    tree.nodes[cid] = child
                    visited.add(cid)
                    queue.append(cid)
                else:
                    report.n_edge_rejections += 1
                    if orphan_policy == "promote":
                        report.n_promoted += 1
                        pending.append(cid)
        tree.children = dict(tree.children)
        trees.append(tree)

    while pending:
        grow(pending.popleft())

    if orphan_policy == "promote" and len(visited) < len(records):
        # parent references can form cycles; break each deterministically at
        # the earliest unvisited record
        for rec in records:
            if rec.id not in visited:
                report.n_cycle_breaks += 1
                report.n_promoted += 1
                grow(rec.id)

    report.n_dropped = len(records) - sum(t.n_nodes for t in trees)
    trees.sort(key=lambda t: position[t.root.id])
    return trees, report


def volume(tree: CascadeTree) -> int:
    """Number of replies/retweets the root accumulated (non-root nodes)."""
    return tree.n_nodes - 1


def wiener_index(tree: CascadeTree) -> float:
    """Mean shortest-path distance over ordered node pairs; 0 for one node.

    Computed in O(n) from subtree sizes: each edge separating s nodes from
    the other n - s contributes s * (n - s) unordered paths of weight 1.
    """
    n = tree.n_nodes
    if n < 2:
        return 0.0
    order: list[str] = []
    stack = [tree.root.id]
    while stack:
        cur = stack.pop()
        order.append(cur)
        stack.extend(tree.children.get(cur, ()))
    size = {node: 1 for node in tree.nodes}
    for node in reversed(order):
        for cid in tree.children.get(node, ()):
            size[node] += size[cid]
    cross = sum(size[node] * (n - size[node]) for node in order[1:])
    return 2.0 * cross / (n * (n - 1))


def responsiveness(tree: CascadeTree) -> float:
    """Mean inverse reply delay in tweets per second; 0 for one node.

    Delays are clamped below at 1 s (timestamps have second resolution, so a
    same-second reply counts as a 1-second response).
    """
    delays = [
        max(tree.nodes[cid].created_at - tree.nodes[pid].created_at, 1)
        for pid, cids in tree.children.items()
        for cid in cids
    ]
    if not delays:
        return 0.0
    return sum(1.0 / d for d in delays) / len(delays)


_METRIC_FN = {"volume": volume, "virality": wiener_index, "responsiveness": responsiveness}


@dataclass
class MetricSeries:
    """Per-bin mean of a tree metric, attributed to root creation times."""

    metric: str
    bin_width_s: int
    origin: int
    values: np.ndarray

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)

    def __len__(self) -> int:
        return len(self.values)

    def bin_starts(self) -> np.ndarray:
        return self.origin + self.bin_width_s * np.arange(len(self.values), dtype=np.int64)


def metric_series(
    forest: list[CascadeTree],
    metric: str,
    bin_width_s: int,
    fill: str = "zero",
    origin: int | None = None,
    end: int | None = None,
) -> MetricSeries:
    """Bin each tree's final metric at its root's creation time, mean per bin.

    A tree's eventual metric is attributed to the second its root was
    created; bins holding several roots average them, and empty bins follow
    ``fill`` (zero or hold_last).
    """
    if not forest:
        raise InputError("no cascades")
    if metric not in _METRIC_FN:
        raise ValueError(f"unknown metric: {metric!r}")
    if fill not in ("zero", "hold_last"):
        raise ValueError(f"unsupported fill for metric series: {fill!r}")
    fn = _METRIC_FN[metric]
    times = np.array([t.root.created_at for t in forest], dtype=np.int64)
    vals = np.array([fn(t) for t in forest], dtype=np.float64)
    origin = int(times.min()) if origin is None else origin
    end = int(times.max()) if end is None else end
    ts = binned_mean(times, vals, origin, end, bin_width_s, fill)
    return MetricSeries(metric, bin_width_s, origin, ts.values)


def follower_series(
    forest: list[CascadeTree],
    bin_width_s: int,
    fill: str = "zero",
    origin: int | None = None,
    end: int | None = None,
) -> TimeSeries:
    """Mean root-author follower count per bin, binned like metric_series.

    This is the endogenous reference channel: how popular the accounts
    starting conversations were, over the same time axis as the metrics.
    """
    if not forest:
        raise InputError("no cascades")
    times = np.array([t.root.created_at for t in forest], dtype=np.int64)
    vals = np.array([t.root.follower_count for t in forest], dtype=np.float64)
    origin = int(times.min()) if origin is None else origin
    end = int(times.max()) if end is None else end
    return binned_mean(times, vals, origin, end, bin_width_s, fill)


def _parse_record(row: dict[str, str], where: str) -> TweetRecord:
    try:
        return TweetRecord(
            id=row["id"],
            parent_id=row["parent_id"] or None,
            root_id=row["root_id"] or None,
            created_at=int(row["created_at"]),
            author_id=row["author_id"],
            follower_count=int(row["follower_count"]),
            language=row["language"],
            polarity=float(row["polarity"]),
        )
    except (KeyError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def read_tweet_file(path, delimiter: str = ",") -> list[TweetRecord]:
    """Read delimiter-separated tweet records; header row is required.

    Columns must be exactly: id, parent_id, root_id, created_at, author_id,
    follower_count, language, polarity. Empty strings mark absent optional
    fields (parent_id, root_id).
    """
    records: list[TweetRecord] = []
    with open(path, newline="") as fh:
        reader = csv.reader(fh, delimiter=delimiter)
        header = next(reader, None)
        if header is None or tuple(h.strip() for h in header) != TWEET_COLUMNS:
            raise InputError(
                f"{path}: header must be exactly {','.join(TWEET_COLUMNS)}"
            )
        for lineno, row in enumerate(reader, start=2):
            if not row:
                continue
            if len(row) != len(TWEET_COLUMNS):
                raise InputError(f"{path}:{lineno}: expected {len(TWEET_COLUMNS)} columns")
            records.append(_parse_record(dict(zip(TWEET_COLUMNS, row)), f"{path}:{lineno}"))
    if not records:
        raise InputError(f"{path}: no records")
    return records


def write_tweet_file(records: list[TweetRecord], path, delimiter: str = ",") -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, delimiter=delimiter)
        w.writerow(TWEET_COLUMNS)
        for r in records:
            w.writerow(
                [
                    r.id,
                    r.parent_id or "",
                    r.root_id or "",
                    r.created_at,
                    r.author_id,
                    r.follower_count,
                    r.language,
                    repr(float(r.polarity)),
                ]
            )


def tree_records(tree: CascadeTree) -> list[TweetRecord]:
    """Flatten a tree back to records, root first, then input order."""
    return [tree.root] + [r for rid, r in tree.nodes.items() if rid != tree.root.id]
