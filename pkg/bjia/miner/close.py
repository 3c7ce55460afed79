# ---------------------------------------------------------------------------
# Close miner for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
from fractions import Fraction

import numpy as np

# Local imports
from bjia.miner.controller import ItemsetMiner
from bjia.miner.itemset import Itemset, check_minsup, labelled, sort_key


def _candidates(level):
    """ Join generators of size k sharing their first k-1 items"""
    gens = sorted(level)
    for n, a in enumerate(gens):
        for b in gens[n+1:]:
            if a[:-1] != b[:-1]:
                break
            yield a + (b[-1],)


def mine_closed(m, minsup):
    """ Closed itemsets with support >= minsup, level-wise over generators

    Level k holds the frequent generators of size k with their closure and
    supporting row count. A candidate of size k+1 is a generator only if all
    its k-subsets are and it is not contained in any of their closures.
    """
    minsup = check_minsup(minsup)
    n_rows, n_cols = len(m.rows), len(m.columns)
    if n_rows == 0 or n_cols == 0:
        return []
    cells = m.cells

    def evaluate(items):
        rows = np.all(cells[:, list(items)], axis=1)
        count = int(rows.sum())
        if Fraction(count, n_rows) < minsup:
            return None
        common = np.all(cells[rows], axis=0)
        return frozenset(np.flatnonzero(common).tolist()), count

    level = {}
    for c in range(n_cols):
        found = evaluate((c,))
        if found is not None:
            level[(c,)] = found

    closed = {}
    while level:
        for items, (clo, count) in level.items():
            closed[clo] = count
        following = {}
        for cand in _candidates(level):
            subsets = [cand[:n] + cand[n+1:] for n in range(len(cand))]
            if any(sub not in level for sub in subsets):
                continue
            if any(set(cand) <= level[sub][0] for sub in subsets):
                continue
            found = evaluate(cand)
            if found is not None:
                following[cand] = found
        level = following

    result = [labelled(Itemset(tuple(clo)), Fraction(count, n_rows), m)
              for clo, count in closed.items()]
    result.sort(key=sort_key)
    return result


class CloseMiner(ItemsetMiner):

    def __init__(self, advisor):
        self.advisor = advisor

    def configure(self, conf):
        return

    def mine(self, matrix, minsup):
        self.advisor.debug(3, "miner.close.mine()")

        result = mine_closed(matrix, minsup)

        self.advisor.debug(3, "miner.close.mine(): %d itemsets" % len(result))
        return result


def instantiate(advisor):
    return CloseMiner(advisor)
