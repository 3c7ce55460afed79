# ---------------------------------------------------------------------------
# Exhaustive closed itemset miner for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
import math
from fractions import Fraction

import numpy as np

# Local imports
from bjia.errors import MinerError
from bjia.miner.controller import ItemsetMiner
from bjia.miner.itemset import Itemset, check_minsup, labelled, sort_key

MAX_COLUMNS = 20
BLOCK = 1 << 14


def mine_closed_bruteforce(m, minsup):
    """ Closures of every frequent non-empty subset of the matrix columns"""
    minsup = check_minsup(minsup)
    n_rows, n_cols = len(m.rows), len(m.columns)
    if n_cols > MAX_COLUMNS:
        raise MinerError("matrix too wide for exhaustive mining (%d columns, "
                         "at most %d)" % (n_cols, MAX_COLUMNS))
    if n_rows == 0 or n_cols == 0:
        return []

    weights = np.left_shift(np.int64(1), np.arange(n_cols, dtype=np.int64))
    rows = (m.cells.astype(np.int64) * weights).sum(axis=1)
    full = np.int64((1 << n_cols) - 1)
    threshold = math.ceil(minsup * n_rows)

    closed = {}
    for start in range(1, 1 << n_cols, BLOCK):
        masks = np.arange(start, min(start + BLOCK, 1 << n_cols),
                          dtype=np.int64)
        contained = (rows[None, :] & masks[:, None]) == masks[:, None]
        counts = contained.sum(axis=1)
        closures = np.bitwise_and.reduce(
            np.where(contained, rows[None, :], full), axis=1)
        for clo, count in zip(closures[counts >= threshold],
                              counts[counts >= threshold]):
            closed[int(clo)] = int(count)

    result = []
    for clo, count in closed.items():
        items = tuple(i for i in range(n_cols) if clo >> i & 1)
        result.append(labelled(Itemset(items), Fraction(count, n_rows), m))
    result.sort(key=sort_key)
    return result


class BruteForceMiner(ItemsetMiner):

    def __init__(self, advisor):
        self.advisor = advisor

    def configure(self, conf):
        return

    def mine(self, matrix, minsup):
        self.advisor.debug(3, "miner.bruteforce.mine()")

        result = mine_closed_bruteforce(matrix, minsup)

        self.advisor.debug(3, "miner.bruteforce.mine(): %d itemsets" % (
                           len(result)))
        return result


def instantiate(advisor):
    return BruteForceMiner(advisor)
