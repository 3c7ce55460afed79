# ---------------------------------------------------------------------------
# Synthetic star schema and workload generator for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# Generates a sales warehouse with one fact table and five dimensions, and
# a workload of star-join queries whose attribute popularity is skewed by a
# seeded random generator. The same seed and scale always produce the same
# files.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
import json
import os

import numpy as np

# Local imports
from bjia.errors import UsageError

FACT_ROWS = 1000000
QUERIES = 40

CATALOG_FILE = "sales.json"
WORKLOAD_FILE = "workload.sql"

# name => (fact foreign key, rows, [(attribute, cardinality, width, type)])
DIMENSIONS = {
    "Customers": ("cust_id", 50000, [
        ("cust_id", 50000, 4, "key"),
        ("city", 300, 20, "str"),
        ("state", 40, 16, "str"),
        ("gender", 2, 1, "str"),
        ("income_level", 12, 4, "int"),
        ("marital_status", 5, 10, "str"),
    ]),
    "Products": ("prod_id", 10000, [
        ("prod_id", 10000, 4, "key"),
        ("category", 20, 20, "str"),
        ("subcategory", 120, 24, "str"),
        ("brand", 400, 20, "str"),
        ("pack_size", 8, 4, "int"),
    ]),
    "Promotions": ("promo_id", 500, [
        ("promo_id", 500, 4, "key"),
        ("media", 6, 12, "str"),
        ("cost_band", 10, 4, "int"),
    ]),
    "Times": ("time_id", 1826, [
        ("time_id", 1826, 4, "key"),
        ("day_of_week", 7, 4, "int"),
        ("month", 12, 4, "int"),
        ("quarter", 4, 4, "int"),
        ("year", 5, 4, "int"),
    ]),
    "Channels": ("channel_id", 5, [
        ("channel_id", 5, 4, "key"),
        ("channel_class", 3, 12, "str"),
        ("channel_desc", 5, 20, "str"),
    ]),
}

MEASURES = [("quantity_sold", 1000, 4), ("amount_sold", 100000, 8)]
FACT_WIDTH = 80


def _catalog(seed, scale):
    dimensions = []
    foreign_keys = {}
    fact_attributes = []
    for name, (fk, rows, attributes) in DIMENSIONS.items():
        key = attributes[0][0]
        dimensions.append({
            "name": name,
            "row_count": rows,
            "tuple_width_bytes": sum(a[2] for a in attributes) + 40,
            "primary_key": [key],
            "attributes": [
                {"name": a, "cardinality": card, "width_bytes": width,
                 "is_key": kind == "key"}
                for a, card, width, kind in attributes],
        })
        foreign_keys[fk] = "%s.%s" % (name, key)
        fact_attributes.append({"name": fk, "cardinality": rows,
                                "width_bytes": 4, "is_key": False})
    for measure, card, width in MEASURES:
        fact_attributes.append({"name": measure, "cardinality": card,
                                "width_bytes": width, "is_key": False})

    return {
        "origin": "synthetic (seed %d, scale %d)" % (seed, scale),
        "params": {"page_size_bytes": 8192, "pointer_size_bytes": 4},
        "fact": {
            "name": "Sales",
            "row_count": FACT_ROWS * scale,
            "tuple_width_bytes": FACT_WIDTH,
            "primary_key": [],
            "attributes": fact_attributes,
            "foreign_keys": foreign_keys,
        },
        "dimensions": dimensions,
    }


def _value(rng, attr, card, kind):
    n = int(rng.integers(1, card + 1))
    if kind == "int":
        return str(n)
    return "'%s_%d'" % (attr, n)


def _restriction(rng, table, attr, card, kind):
    column = "%s.%s" % (table, attr)
    shape = rng.random()
    if shape < 0.6 or card < 3:
        return "%s = %s" % (column, _value(rng, attr, card, kind))
    if kind == "int" and shape < 0.8:
        low = int(rng.integers(1, card))
        high = int(rng.integers(low + 1, card + 1))
        return "%s BETWEEN %d AND %d" % (column, low, high)
    k = int(rng.integers(2, min(card, 4) + 1))
    picked = rng.choice(np.arange(1, card + 1), size=k, replace=False)
    if kind == "int":
        values = [str(int(v)) for v in sorted(picked)]
    else:
        values = ["'%s_%d'" % (attr, int(v)) for v in sorted(picked)]
    return "%s IN (%s)" % (column, ", ".join(values))


def _workload(rng):
    names = list(DIMENSIONS)
    # Skewed popularity: dimensions and, within each, their attributes
    dim_weights = rng.dirichlet(np.full(len(names), 0.9))
    attr_weights = {}
    for name in names:
        count = len(DIMENSIONS[name][2]) - 1
        ranks = rng.permutation(count) + 1
        weights = 1.0 / ranks ** 1.2
        attr_weights[name] = weights / weights.sum()

    statements = []
    for n in range(QUERIES):
        joined = int(rng.choice([1, 2, 3], p=[0.3, 0.45, 0.25]))
        dims = sorted(rng.choice(len(names), size=joined, replace=False,
                                 p=dim_weights))
        tables = ["Sales"]
        joins = []
        where = []
        group_by = []
        for d in dims:
            name = names[d]
            fk, rows, attributes = DIMENSIONS[name]
            tables.append(name)
            joins.append("Sales.%s = %s.%s" % (fk, name, attributes[0][0]))
            picks = 1 + int(rng.random() < 0.35)
            chosen = rng.choice(len(attributes) - 1, size=picks,
                                replace=False, p=attr_weights[name])
            for c in sorted(chosen):
                attr, card, width, kind = attributes[c + 1]
                if rng.random() < 0.7:
                    where.append(_restriction(rng, name, attr, card, kind))
                else:
                    group_by.append("%s.%s" % (name, attr))

        select = ", ".join(group_by + ["SUM(Sales.amount_sold)"])
        sql = "SELECT %s FROM %s WHERE %s" % (
            select, ", ".join(tables), " AND ".join(joins + where))
        if group_by:
            sql += " GROUP BY %s" % ", ".join(group_by)
        statements.append("-- Q%d\n%s;\n" % (n + 1, sql))
    return "".join(statements)


def generate_synthetic(seed=42, scale=1):
    """ Catalog (JSON text) and workload (SQL text) of a synthetic warehouse"""
    if isinstance(scale, bool) or not isinstance(scale, int) or scale < 1:
        raise UsageError("scale must be an integer >= 1, got %r" % (scale,))
    rng = np.random.default_rng(seed)
    catalog = json.dumps(_catalog(seed, scale), indent=2) + "\n"
    return catalog, _workload(rng)


def write_synthetic(directory, seed=42, scale=1):
    catalog, workload = generate_synthetic(seed, scale)
    os.makedirs(directory, exist_ok=True)
    paths = (os.path.join(directory, CATALOG_FILE),
             os.path.join(directory, WORKLOAD_FILE))
    for path, text in zip(paths, (catalog, workload)):
        with open(path, "w", encoding="utf-8") as f:
            f.write(text)
    return paths
