# ---------------------------------------------------------------------------
# Profit objective for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# Local imports
from bjia.costmodel import maintenance_fact_insert, workload_cost
from bjia.errors import UsageError
from bjia.objective.controller import ObjectiveFunction


def profit(i, S, Q, cat):
    """ Workload cost saved by adding i to the selection S"""
    S = tuple(S)
    return workload_cost(Q, S, cat) - workload_cost(Q, S + (i,), cat)


def profit_delta(costs, totals, i):
    return sum(totals) - sum(costs.extended_totals(totals, i))


def parse_weight(conf, default=0.0):
    try:
        weight = float(conf.get('maintenance_weight', default))
    except ValueError:
        raise UsageError("invalid maintenance weight %r" % (
            conf.get('maintenance_weight'),))
    if weight < 0:
        raise UsageError("maintenance weight must not be negative")
    return weight


def weighted_profit(i, state, weight):
    gain = profit_delta(state.costs, state.totals, i)
    if weight:
        gain -= weight * maintenance_fact_insert(i, state.costs.catalog)
    return gain


class ProfitObjective(ObjectiveFunction):

    def __init__(self, advisor):
        self.advisor = advisor
        self.maintenance_weight = 0.0

    def configure(self, conf):
        self.maintenance_weight = parse_weight(conf, self.maintenance_weight)

    def evaluate(self, i, state):
        return weighted_profit(i, state, self.maintenance_weight)


def instantiate(advisor):
    return ProfitObjective(advisor)
