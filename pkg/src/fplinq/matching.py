"""Weighted bipartite matching between receivers (rows) and transmitters
(columns), with unmatched vertices allowed.

Both solvers maximize total weight over one-to-one pairings restricted to the
given edges. Leaving a vertex unmatched is always feasible (the scheduling
constraints are inequalities), which is realized by augmenting each row with
a private zero-weight no-match option; consequently edges with negative
weight are never forced into a solution, and matched edges with nonpositive
weight are dropped from the result as no-ops.
"""

from dataclasses import dataclass

import numpy as np
from scipy.optimize import linear_sum_assignment


class NonTermination(RuntimeError):
    """Auction exceeded its round limit."""


@dataclass(frozen=True, eq=False)
class MatchingProblem:
    num_rows: int
    num_cols: int
    rows: np.ndarray      # (E,) int64
    cols: np.ndarray      # (E,) int64
    weights: np.ndarray   # (E,) float64

    def __post_init__(self):
        r = np.asarray(self.rows, dtype=np.int64)
        c = np.asarray(self.cols, dtype=np.int64)
        w = np.asarray(self.weights, dtype=float)
        if not (r.shape == c.shape == w.shape):
            raise ValueError("rows, cols, weights must have equal length")
        if r.size and (r.min() < 0 or r.max() >= self.num_rows
                       or c.min() < 0 or c.max() >= self.num_cols):
            raise ValueError("edge endpoint out of range")
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.unique(np.stack([r, c]), axis=1).shape[1] != r.size:
            raise ValueError("duplicate edge")
        object.__setattr__(self, "rows", r)
        object.__setattr__(self, "cols", c)
        object.__setattr__(self, "weights", w)

    @property
    def num_edges(self):
        return self.rows.size


@dataclass(frozen=True, eq=False)
class Matching:
    rows: np.ndarray
    cols: np.ndarray
    value: float

    def pairs(self):
        return list(zip(self.rows.tolist(), self.cols.tolist()))

    def col_of_row(self, num_rows):
        out = np.full(num_rows, -1, dtype=np.int64)
        out[self.rows] = self.cols
        return out


def _result(p: MatchingProblem, row_to_col):
    lut = {(int(r), int(c)): w for r, c, w in zip(p.rows, p.cols, p.weights)}
    rows, cols, total = [], [], 0.0
    for r, c in row_to_col.items():
        w = lut.get((r, c))
        if w is not None and w > 0.0:
            rows.append(r)
            cols.append(c)
            total += w
    order = np.argsort(np.asarray(rows, dtype=np.int64), kind="stable") if rows else []
    rows = np.asarray(rows, dtype=np.int64)[order] if len(rows) else np.zeros(0, np.int64)
    cols = np.asarray(cols, dtype=np.int64)[order] if len(cols) else np.zeros(0, np.int64)
    return Matching(rows=rows, cols=cols, value=total)


def hungarian(p: MatchingProblem) -> Matching:
    """Exact maximum-weight matching via the rectangular Hungarian method.

    Rows are padded with private no-match columns so the assignment is never
    forced to use a real edge.
    """
    if p.num_edges == 0:
        return Matching(np.zeros(0, np.int64), np.zeros(0, np.int64), 0.0)
    big = (abs(p.weights).max() + 1.0) * (p.num_rows + p.num_cols + 1)
    w = np.full((p.num_rows, p.num_cols + p.num_rows), -big)
    w[p.rows, p.cols] = p.weights
    w[np.arange(p.num_rows), p.num_cols + np.arange(p.num_rows)] = 0.0
    rr, cc = linear_sum_assignment(w, maximize=True)
    return _result(p, {int(r): int(c) for r, c in zip(rr, cc) if c < p.num_cols})


def auction(p: MatchingProblem, epsilon: float, max_rounds=None) -> Matching:
    """Forward auction with epsilon scaling.

    The unmatched option is realized by augmenting each row with a private
    zero-weight null object, which makes the problem symmetric (every active
    row is always assignable); the classic scaling scheme then applies
    unchanged, with prices carried across phases. The returned matching is
    within (number matched) * epsilon of optimal; for epsilon below the
    smallest relevant weight gap it is exact.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    if p.num_edges == 0:
        return Matching(np.zeros(0, np.int64), np.zeros(0, np.int64), 0.0)

    # options per row: real edges plus the private null object p.num_cols + r
    options = [[] for _ in range(p.num_rows)]
    for r, c, w in zip(p.rows, p.cols, p.weights):
        options[int(r)].append((int(c), float(w)))
    active_rows = [r for r in range(p.num_rows) if options[r]]
    for r in active_rows:
        options[r].append((p.num_cols + r, 0.0))

    if max_rounds is None:
        max_rounds = 5000 * (p.num_edges + p.num_rows + 10)

    final_eps = epsilon / 8.0
    w_max = float(abs(p.weights).max())
    eps = max(w_max / 2.0, final_eps)
    price = np.zeros(p.num_cols + p.num_rows)
    rounds = 0
    while True:
        owner = {}       # object -> row
        assigned = {}    # row -> object
        unassigned = list(active_rows)
        while unassigned:
            rounds += 1
            if rounds > max_rounds:
                raise NonTermination(f"auction exceeded {max_rounds} rounds")
            r = unassigned.pop()
            best_c, best_v, second_v = None, -np.inf, -np.inf
            for c, w in options[r]:
                v = w - price[c]
                if v > best_v:
                    best_c, best_v, second_v = c, v, best_v
                elif v > second_v:
                    second_v = v
            price[best_c] += best_v - second_v + eps
            prev = owner.get(best_c)
            if prev is not None:
                del assigned[prev]
                unassigned.append(prev)
            owner[best_c] = r
            assigned[r] = best_c
        # objects left unsold were not bid on this phase; drop their stale
        # prices so they cannot distort the next phase's optimality bound
        sold = np.zeros(price.size, dtype=bool)
        sold[list(owner)] = True
        price[~sold] = 0.0
        if eps <= final_eps:
            break
        eps = max(eps / 4.0, final_eps)
    return _result(p, {r: c for r, c in assigned.items() if c < p.num_cols})


def brute_force_value(p: MatchingProblem) -> float:
    """Optimal value by dynamic programming over column subsets; independent
    oracle for small instances (cols <= 16)."""
    if p.num_cols > 16:
        raise ValueError("brute force limited to 16 columns")
    w = np.zeros((p.num_rows, p.num_cols))
    w[p.rows, p.cols] = p.weights
    masks = np.arange(1 << p.num_cols)
    best = np.zeros(masks.size)
    for r in range(p.num_rows):
        nxt = best.copy()
        for c in range(p.num_cols):
            if w[r, c] <= 0:
                continue
            bit = 1 << c
            src = masks[(masks & bit) == 0]
            dst = src | bit
            nxt[dst] = np.maximum(nxt[dst], best[src] + w[r, c])
        best = nxt
    return float(best.max())
