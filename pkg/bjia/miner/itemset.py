# ---------------------------------------------------------------------------
# Itemsets, support and closure over a query-attribute matrix
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Tuple

import numpy as np

# Local imports
from bjia.errors import MinerError


@dataclass(frozen=True, order=True)
class Itemset:
    items: Tuple[int, ...] = ()

    def __post_init__(self):
        items = tuple(sorted(set(int(i) for i in self.items)))
        object.__setattr__(self, "items", items)

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


@dataclass(frozen=True)
class FrequentClosedItemset:
    itemset: Itemset
    support: Fraction
    attributes: Tuple = field(default=(), compare=False)

    def names(self):
        return [str(a) for a in self.attributes]


def as_fraction(value):
    """ Exact rational from a Fraction, int, string ('0.25', '1/4') or float"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        value = repr(value)
    try:
        return Fraction(value)
    except (ValueError, TypeError, ZeroDivisionError):
        raise MinerError("invalid minimal support %r" % (value,))


def check_minsup(minsup):
    minsup = as_fraction(minsup)
    if not Fraction(0) < minsup <= Fraction(1):
        raise MinerError("minimal support %s out of range (0, 1]" % minsup)
    return minsup


def _check_items(s, m):
    for i in s.items:
        if not 0 <= i < len(m.columns):
            raise MinerError("item %d out of range for a matrix of %d "
                             "columns" % (i, len(m.columns)))


def supporting_rows(s, m):
    _check_items(s, m)
    return np.all(m.cells[:, list(s.items)], axis=1)


def support(s, m):
    """ Fraction of the rows containing every item of s; support(empty) = 1"""
    if len(s) == 0:
        return Fraction(1)
    if len(m.rows) == 0:
        return Fraction(0)
    return Fraction(int(supporting_rows(s, m).sum()), len(m.rows))


def closure(s, m):
    """ Intersection of the rows containing s"""
    rows = supporting_rows(s, m)
    if not rows.any():
        raise MinerError("closure undefined for itemset %s with support 0" %
                         list(s.items))
    common = np.all(m.cells[rows], axis=0)
    return Itemset(tuple(np.flatnonzero(common)))


def sort_key(fci):
    return (-fci.support, len(fci.itemset), fci.itemset.items)


def labelled(itemset, sup, m):
    return FrequentClosedItemset(
        itemset, sup, tuple(m.columns[i] for i in itemset.items))
