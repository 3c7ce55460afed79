# ---------------------------------------------------------------------------
# Profit/space ratio objective for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# Local imports
from bjia.costmodel import index_size_bytes
from bjia.objective.controller import ObjectiveFunction
from bjia.objective.profit import parse_weight, profit, weighted_profit


def ratio(i, S, Q, cat):
    return profit(i, S, Q, cat) / max(1, index_size_bytes(i, cat))


class RatioObjective(ObjectiveFunction):

    def __init__(self, advisor):
        self.advisor = advisor
        self.maintenance_weight = 0.0

    def configure(self, conf):
        self.maintenance_weight = parse_weight(conf, self.maintenance_weight)

    def evaluate(self, i, state):
        gain = weighted_profit(i, state, self.maintenance_weight)
        return gain / max(1, state.costs.size(i))


def instantiate(advisor):
    return RatioObjective(advisor)
