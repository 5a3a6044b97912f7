"""CoNLL-U parsing and gold tree geometry.

Only FORM, UPOS and HEAD are consumed; multiword-token ranges ("a-b" ids)
and empty nodes ("a.b" ids) are skipped so syntactic words occupy positions
1..n. DEPREL and the remaining columns are ignored.
"""

import logging
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import ConlluParseError, TreeValidationError

log = logging.getLogger(__name__)

N_COLUMNS = 10


@dataclass(frozen=True)
class Token:
    form: str
    upos: str
    head: int  # 0 = virtual root
    index: int  # 1-based position


@dataclass(frozen=True)
class SentenceTree:
    id: str
    tokens: tuple = field(default_factory=tuple)

    def __len__(self):
        return len(self.tokens)

    @property
    def heads(self):
        return [t.head for t in self.tokens]

    @property
    def root(self):
        """1-based index of the head-0 token."""
        for t in self.tokens:
            if t.head == 0:
                return t.index
        raise TreeValidationError("no root token", self.id)


def validate_tree(tree):
    """Check that the head relation forms a single tree rooted at the head-0 token."""
    n = len(tree)
    if n == 0:
        raise TreeValidationError("empty sentence", tree.id)
    roots = [t.index for t in tree.tokens if t.head == 0]
    if len(roots) != 1:
        raise TreeValidationError(f"expected exactly one root, found {len(roots)}", tree.id)
    for t in tree.tokens:
        if not (0 <= t.head <= n):
            raise TreeValidationError(
                f"token {t.index}: head {t.head} out of range [0, {n}]", tree.id
            )
        if t.head == t.index:
            raise TreeValidationError(f"token {t.index} is its own head", tree.id)
    # connectivity: walk up from every token; a cycle never reaches the root
    for t in tree.tokens:
        seen = set()
        cur = t.index
        while cur != 0:
            if cur in seen:
                raise TreeValidationError(f"cycle through token {cur}", tree.id)
            seen.add(cur)
            cur = tree.tokens[cur - 1].head
    return tree


def _build_sentence(sent_id, rows):
    tokens = tuple(
        Token(form=form, upos=upos, head=head, index=i + 1)
        for i, (form, upos, head) in enumerate(rows)
    )
    return validate_tree(SentenceTree(id=sent_id, tokens=tokens))


def parse_conllu(text, skip_invalid=False):
    """Parse a CoNLL-U document into a list of SentenceTree.

    Sentences failing tree validation raise TreeValidationError unless
    skip_invalid is set, in which case they are logged and dropped.
    """
    sentences = []
    rows = []
    sent_id = None
    seq = 0

    def flush(line_no):
        nonlocal rows, sent_id, seq
        if not rows:
            sent_id = None
            return
        sid = sent_id if sent_id is not None else str(seq)
        try:
            sentences.append(_build_sentence(sid, rows))
        except TreeValidationError:
            if not skip_invalid:
                raise
            log.warning("dropping invalid sentence %r (before line %d)", sid, line_no)
        seq += 1
        rows = []
        sent_id = None

    for line_no, line in enumerate(text.splitlines(), start=1):
        line = line.rstrip("\n")
        if not line.strip():
            flush(line_no)
            continue
        if line.startswith("#"):
            comment = line[1:].strip()
            if comment.startswith("sent_id"):
                _, _, value = comment.partition("=")
                if value.strip():
                    sent_id = value.strip()
            continue
        cols = line.split("\t")
        if len(cols) != N_COLUMNS:
            raise ConlluParseError(
                f"expected {N_COLUMNS} tab-separated columns, got {len(cols)}", line_no
            )
        tok_id = cols[0]
        if "-" in tok_id or "." in tok_id:
            continue  # multiword range / empty node
        try:
            head = int(cols[6])
        except ValueError:
            raise ConlluParseError(f"non-integer HEAD {cols[6]!r}", line_no) from None
        if head < 0:
            raise ConlluParseError(f"negative HEAD {head}", line_no)
        rows.append((cols[1], cols[3], head))
    flush(len(text.splitlines()) + 1)
    return sentences


def gold_edges(tree):
    """Undirected (head, dependent) pairs, 1-based, excluding the virtual root."""
    return {
        (min(t.index, t.head), max(t.index, t.head))
        for t in tree.tokens
        if t.head != 0
    }


def gold_distances(tree):
    """n x n matrix of path lengths (in edges) between tokens, by BFS per node."""
    n = len(tree)
    adj = [[] for _ in range(n)]
    for a, b in gold_edges(tree):
        adj[a - 1].append(b - 1)
        adj[b - 1].append(a - 1)
    dist = np.zeros((n, n), dtype=np.int64)
    for src in range(n):
        seen = np.full(n, -1, dtype=np.int64)
        seen[src] = 0
        queue = deque([src])
        while queue:
            u = queue.popleft()
            for v in adj[u]:
                if seen[v] < 0:
                    seen[v] = seen[u] + 1
                    queue.append(v)
        dist[src] = seen
    return dist


def gold_depths(tree):
    """Vector of edge counts to the root; root depth is 0."""
    n = len(tree)
    depths = np.full(n, -1, dtype=np.int64)

    def depth_of(i):
        if depths[i] >= 0:
            return depths[i]
        head = tree.tokens[i].head
        d = 0 if head == 0 else depth_of(head - 1) + 1
        depths[i] = d
        return d

    for i in range(n):
        depth_of(i)
    return depths


def punctuation_mask(tree):
    """True where upos is PUNCT."""
    return np.array([t.upos == "PUNCT" for t in tree.tokens], dtype=bool)
