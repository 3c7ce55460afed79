# ---------------------------------------------------------------------------
# Hybrid objective for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# Scores candidates by profit while the used space stays below alpha times
# the budget, and by profit/space ratio once that threshold is reached.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# Local imports
from bjia.errors import UsageError
from bjia.objective.controller import ObjectiveFunction
from bjia.objective.profit import parse_weight, profit, weighted_profit
from bjia.objective.ratio import ratio

DEFAULT_ALPHA = 0.5


def check_alpha(alpha):
    try:
        alpha = float(alpha)
    except (TypeError, ValueError):
        raise UsageError("invalid alpha %r" % (alpha,))
    if not 0.0 <= alpha <= 1.0:
        raise UsageError("alpha %g out of range [0, 1]" % alpha)
    return alpha


def space_critical(used_bytes, alpha, budget):
    return used_bytes >= alpha * budget


def hybrid(i, S, Q, cat, alpha, budget, used_bytes):
    if space_critical(used_bytes, alpha, budget):
        return ratio(i, S, Q, cat)
    return profit(i, S, Q, cat)


class HybridObjective(ObjectiveFunction):

    def __init__(self, advisor):
        self.advisor = advisor
        self.alpha = DEFAULT_ALPHA
        self.maintenance_weight = 0.0

    def configure(self, conf):
        if conf.get('alpha') is not None:
            self.alpha = check_alpha(conf['alpha'])
        self.maintenance_weight = parse_weight(conf, self.maintenance_weight)

    def evaluate(self, i, state):
        gain = weighted_profit(i, state, self.maintenance_weight)
        if space_critical(state.used_bytes, self.alpha, state.budget_bytes):
            return gain / max(1, state.costs.size(i))
        return gain


def instantiate(advisor):
    return HybridObjective(advisor)
