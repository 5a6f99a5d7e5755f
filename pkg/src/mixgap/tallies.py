"""Skipped-chain tallying and empirical transition estimates.

A single pass over a trajectory produces, for each skip rate k, the visit
counts N_x and transition counts N_{xx'} of the k-skipped chain (pairs
(X_{1+k(t-1)}, X_{1+kt}) for t = 1..floor((m-1)/k)). On top of the raw counts
sit the unsmoothed rescaled matrix N_{xx'}/sqrt(N_x N_{x'}) and the
alpha-smoothed transition/stationary/rescaled estimates.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.sparse import coo_matrix, csr_matrix

from .chain import Trajectory
from .errors import TrajectoryTooShortError, UnvisitedStateError


@dataclass(frozen=True, eq=False)
class SkippedTallies:
    """Visit and transition counts of the k-skipped chain."""

    k: int
    n: int
    m: int
    visits: np.ndarray
    transitions: csr_matrix

    def __post_init__(self):
        if self.k < 1:
            raise ValueError("skip rate must be >= 1")
        visits = np.asarray(self.visits, dtype=np.int64)
        visits.flags.writeable = False
        object.__setattr__(self, "visits", visits)
        pairs = (self.m - 1) // self.k
        if visits.sum() != pairs:
            raise ValueError("visit counts must sum to floor((m-1)/k)")
        rowsums = np.asarray(self.transitions.sum(axis=1)).ravel()
        if not np.array_equal(rowsums.astype(np.int64), visits):
            raise ValueError("transition row sums must match visit counts")

    @property
    def num_pairs(self) -> int:
        """Number of counted transitions, floor((m-1)/k)."""
        return (self.m - 1) // self.k

    @property
    def n_min(self) -> int:
        return int(self.visits.min())

    @property
    def n_max(self) -> int:
        return int(self.visits.max())

    def transitions_dense(self) -> np.ndarray:
        return self.transitions.toarray().astype(float)

    def to_dict(self) -> dict:
        coo = self.transitions.tocoo()
        return {
            "k": self.k,
            "n": self.n,
            "m": self.m,
            "visits": self.visits.tolist(),
            "transitions": [
                [int(r), int(c), int(v)]
                for r, c, v in sorted(zip(coo.row, coo.col, coo.data))
            ],
        }


@dataclass(frozen=True, eq=False)
class SmoothedEstimates:
    """alpha-smoothed transition matrix, stationary estimate, and rescaling."""

    alpha: float
    P_hat: np.ndarray
    pi_hat: np.ndarray
    L_hat: np.ndarray


def tally(tr: Trajectory, k: int = 1) -> SkippedTallies:
    """Count visits and transitions of the k-skipped chain of a trajectory.

    Raises:
        TrajectoryTooShortError: if the trajectory has no pair at skip k.
    """
    if k < 1:
        raise ValueError("skip rate must be >= 1")
    if tr.m < k + 1:
        raise TrajectoryTooShortError(
            f"need at least {k + 1} observations for skip {k}, got {tr.m}"
        )
    skipped = tr.states[::k]
    src = skipped[:-1]
    dst = skipped[1:]
    visits = np.bincount(src, minlength=tr.n).astype(np.int64)
    trans = coo_matrix(
        (np.ones(src.size, dtype=np.int64), (src, dst)), shape=(tr.n, tr.n)
    ).tocsr()
    trans.sum_duplicates()
    return SkippedTallies(k=k, n=tr.n, m=tr.m, visits=visits, transitions=trans)


def unsmoothed_L_hat(t: SkippedTallies) -> np.ndarray:
    """Entrywise N_{xx'} / sqrt(N_x N_{x'}).

    Raises:
        UnvisitedStateError: when some state has zero visits, listing them.
    """
    zero = np.nonzero(t.visits == 0)[0]
    if zero.size:
        raise UnvisitedStateError(zero)
    root = np.sqrt(t.visits.astype(float))
    return t.transitions_dense() / np.outer(root, root)


def smoothed_estimates(t: SkippedTallies, alpha: float) -> SmoothedEstimates:
    """alpha-smoothed P_hat, pi_hat and L_hat; well-defined for any counts.

    P_hat(x, x') = (N_{xx'} + a) / (N_x + n a)
    pi_hat(x) = (N_x + n a) / (floor((m-1)/k) + n^2 a)
    L_hat = diag(pi_hat)^{1/2} P_hat diag(pi_hat)^{-1/2}
    """
    if alpha <= 0:
        raise ValueError("alpha must be > 0")
    n = t.n
    counts = t.transitions_dense()
    visits = t.visits.astype(float)
    P_hat = (counts + alpha) / (visits + n * alpha)[:, None]
    pi_hat = (visits + n * alpha) / (t.num_pairs + n * n * alpha)
    root = np.sqrt(pi_hat)
    L_hat = (root[:, None] * P_hat) / root[None, :]
    return SmoothedEstimates(alpha=alpha, P_hat=P_hat, pi_hat=pi_hat, L_hat=L_hat)
