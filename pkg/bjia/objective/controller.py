# ---------------------------------------------------------------------------
# Objective function interface for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

import abc
from dataclasses import dataclass
from typing import List, Optional


@dataclass
class SelectionState:
    """ Greedy selection state seen by the objective functions

    totals holds the per-query cost of the current selection, in the query
    order of the cost model.
    """
    costs: object
    totals: List[float]
    used_bytes: int = 0
    budget_bytes: Optional[int] = None


class ObjectiveFunction(metaclass=abc.ABCMeta):

    @abc.abstractmethod
    def configure(self, conf):
        """ Configure this objective from the provided configuration"""
        return

    @abc.abstractmethod
    def evaluate(self, i, state):
        """ Score candidate i against the current selection"""
        return 0.0
