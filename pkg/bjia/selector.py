# ---------------------------------------------------------------------------
# Greedy index configuration selection for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
import importlib
from collections import Counter
from dataclasses import dataclass
from typing import Optional, Tuple

# Local imports
from bjia.costmodel import CostModel
from bjia.errors import UsageError
from bjia.objective.controller import SelectionState
from bjia.objective.hybrid import DEFAULT_ALPHA, check_alpha

PROFIT = "profit"
RATIO = "ratio"
HYBRID = "hybrid"
KINDS = (PROFIT, RATIO, HYBRID)


@dataclass(frozen=True)
class ObjectiveKind:
    kind: str = PROFIT
    alpha: Optional[float] = None
    budget_bytes: Optional[int] = None
    maintenance_weight: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise UsageError("unknown objective '%s' (expected one of %s)" % (
                self.kind, ", ".join(KINDS)))
        if self.kind == HYBRID:
            alpha = DEFAULT_ALPHA if self.alpha is None else self.alpha
            object.__setattr__(self, "alpha", check_alpha(alpha))
        else:
            object.__setattr__(self, "alpha", None)
        if self.budget_bytes is None:
            if self.kind != PROFIT:
                raise UsageError("the %s objective requires a budget" %
                                 self.kind)
        elif self.budget_bytes < 0:
            raise UsageError("budget must not be negative")
        if self.maintenance_weight < 0:
            raise UsageError("maintenance weight must not be negative")

    def conf(self):
        conf = {'maintenance_weight': self.maintenance_weight}
        if self.alpha is not None:
            conf['alpha'] = self.alpha
        return conf


@dataclass(frozen=True)
class TraceStep:
    index_id: str
    objective: float
    workload_cost: float
    total_bytes: int


@dataclass(frozen=True)
class SelectionTrace:
    iterations: Tuple[TraceStep, ...] = ()

    def __len__(self):
        return len(self.iterations)

    def __iter__(self):
        return iter(self.iterations)


@dataclass(frozen=True)
class IndexConfiguration:
    selected: Tuple = ()
    total_bytes: int = 0
    final_cost: float = 0.0
    baseline_cost: float = 0.0
    trace: SelectionTrace = SelectionTrace()

    def __len__(self):
        return len(self.selected)

    def __iter__(self):
        return iter(self.selected)

    @property
    def ids(self):
        return [i.id for i in self.selected]

    @property
    def saving_ratio(self):
        if not self.baseline_cost:
            return 0.0
        return 1.0 - self.final_cost / self.baseline_cost


def load_objective(obj, advisor=None):
    mod = importlib.import_module("bjia.objective." + obj.kind)
    factory = getattr(mod, 'instantiate')
    objective = factory(advisor)
    objective.variant = obj.kind
    objective.configure(obj.conf())
    return objective


def _fits(i, size, state, per_table, max_per_table):
    if state.budget_bytes is not None and \
            state.used_bytes + size > state.budget_bytes:
        return False
    if max_per_table is not None:
        return all(per_table[t] < max_per_table for t in i.on_dimensions)
    return True


def greedy_select(candidates, Q, cat, obj, max_per_table=None, advisor=None,
                  costs=None):
    """ Build an index configuration one candidate at a time

    Every iteration scores the remaining candidates against the current
    selection and adds the best one with a positive score that fits the
    budget and per-table limits. Ties go to the smaller index, then to the
    smaller id. Selection stops when no candidate qualifies.
    """
    def debug(level, msg):
        if advisor is not None:
            advisor.debug(level, msg)

    debug(3, "selector.greedy_select()")

    if costs is None:
        costs = CostModel(advisor, cat, Q)
    objective = load_objective(obj, advisor)
    state = SelectionState(costs, costs.totals(()), 0, obj.budget_bytes)
    baseline = sum(state.totals)

    remaining = list(candidates)
    per_table = Counter()
    selected = []
    steps = []
    while remaining:
        best = None
        for i in remaining:
            size = costs.size(i)
            if not _fits(i, size, state, per_table, max_per_table):
                continue
            f = objective.evaluate(i, state)
            debug(4, "%s: F=%.6g size=%d" % (i.id, f, size))
            if f <= 0:
                continue
            key = (-f, size, i.id)
            if best is None or key < best[0]:
                best = (key, i, f)
        if best is None:
            break

        _, i, f = best
        remaining.remove(i)
        selected.append(i)
        state.totals = costs.extended_totals(state.totals, i)
        state.used_bytes += costs.size(i)
        per_table.update(i.on_dimensions)
        steps.append(TraceStep(i.id, f, sum(state.totals), state.used_bytes))
        debug(2, "selected %s (F=%.6g, cost %.2f, %d bytes)" % (
              i.id, f, steps[-1].workload_cost, state.used_bytes))

    result = IndexConfiguration(tuple(selected), state.used_bytes,
                                sum(state.totals), baseline,
                                SelectionTrace(tuple(steps)))
    debug(3, "selector.greedy_select(): %s" % result.ids)
    return result


def price_configuration(indexes, costs):
    """ Configuration made of the given indexes, without a selection trace"""
    indexes = tuple(indexes)
    return IndexConfiguration(indexes, sum(costs.size(i) for i in indexes),
                              costs.workload_cost(indexes),
                              costs.baseline_cost())
