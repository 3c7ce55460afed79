# ---------------------------------------------------------------------------
# Itemset miner interface for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

import abc


class ItemsetMiner(metaclass=abc.ABCMeta):

    @abc.abstractmethod
    def configure(self, conf):
        """ Configure this miner from the provided configuration"""
        return

    @abc.abstractmethod
    def mine(self, matrix, minsup):
        """ Frequent closed itemsets of the query-attribute matrix"""
        return []
