"""Numba-compiled inner loops.

The surrounding modules pre-draw all randomness with numpy generators and
pass plain arrays, so these kernels are deterministic and hold no state.
Pure-python reference implementations live next to their callers; the
kernels must match them update for update.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(nogil=True, cache=True)
def sgns_pairs(inp, out, centers, contexts, negatives, lrs):
    """Apply one (center, context, negatives) update per row; return summed loss.

    Per pair: dot products and the loss use the pre-update vectors, output
    rows are updated immediately, and the accumulated input-side gradient
    lands on the center vector after all rows of the pair are processed.
    """
    dim = inp.shape[1]
    n_pairs = centers.shape[0]
    k = negatives.shape[1]
    neu1e = np.zeros(dim, dtype=np.float64)
    total_loss = 0.0
    for i in range(n_pairs):
        v = inp[centers[i]]
        lr = lrs[i]
        for d in range(dim):
            neu1e[d] = 0.0

        u = out[contexts[i]]
        s = 0.0
        for d in range(dim):
            s += u[d] * v[d]
        total_loss += np.logaddexp(0.0, -s)
        g = (1.0 - 1.0 / (1.0 + np.exp(-s))) * lr
        for d in range(dim):
            neu1e[d] += g * u[d]
            u[d] += g * v[d]

        for j in range(k):
            un = out[negatives[i, j]]
            s = 0.0
            for d in range(dim):
                s += un[d] * v[d]
            total_loss += np.logaddexp(0.0, s)
            g = (0.0 - 1.0 / (1.0 + np.exp(-s))) * lr
            for d in range(dim):
                neu1e[d] += g * un[d]
                un[d] += g * v[d]

        for d in range(dim):
            v[d] += neu1e[d]
    return total_loss


@njit(nogil=True, cache=True)
def best_split(X, y, feature_ids, min_leaf):
    """Exhaustive best Gini split over the given feature columns.

    Candidate thresholds are midpoints between consecutive distinct sorted
    values (snapped down when rounding would reach the upper value, so the
    predicate x <= threshold matches the scan).  Splits leaving fewer than
    ``min_leaf`` rows on either side are skipped.  Features are scanned in
    the order given and thresholds ascending with strictly-greater gain
    required, so equal gains resolve to the earliest feature, then the
    lowest threshold.  Returns (feature, threshold, gain); feature is -1
    when no admissible split has positive gain.
    """
    n = X.shape[0]
    total_pos = 0
    for i in range(n):
        total_pos += y[i]
    p1 = total_pos / n
    parent_gini = 1.0 - p1 * p1 - (1.0 - p1) * (1.0 - p1)

    best_gain = 0.0
    best_feat = -1
    best_thr = 0.0
    for fi in range(feature_ids.shape[0]):
        f = feature_ids[fi]
        vals = X[:, f].copy()
        order = np.argsort(vals)
        pos = 0
        for idx in range(n - 1):
            i0 = order[idx]
            pos += y[i0]
            cnt = idx + 1
            v0 = vals[i0]
            v1 = vals[order[idx + 1]]
            if v1 <= v0:
                continue
            if cnt < min_leaf or n - cnt < min_leaf:
                continue
            pl = pos / cnt
            pr = (total_pos - pos) / (n - cnt)
            gl = 1.0 - pl * pl - (1.0 - pl) * (1.0 - pl)
            gr = 1.0 - pr * pr - (1.0 - pr) * (1.0 - pr)
            gain = parent_gini - (cnt / n) * gl - ((n - cnt) / n) * gr
            if gain > best_gain:
                thr = 0.5 * (v0 + v1)
                if thr >= v1:
                    thr = v0
                best_gain = gain
                best_feat = f
                best_thr = thr
    return best_feat, best_thr, best_gain
