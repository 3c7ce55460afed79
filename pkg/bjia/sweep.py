# ---------------------------------------------------------------------------
# Parameter sweeps for bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
from dataclasses import dataclass, field
from typing import Dict, Tuple

import pandas as pd

# Local imports
from bjia.errors import UsageError

MINSUP = "minsup"
BUDGET = "budget"
ALPHA = "alpha"
VARIABLES = (MINSUP, BUDGET, ALPHA)

COLUMNS = ["value", "candidates", "selected", "total_bytes",
           "workload_cost", "baseline_cost", "cost_ratio", "selection"]


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    values: Tuple = ()
    fixed: Dict = field(default_factory=dict)

    def __post_init__(self):
        if self.variable not in VARIABLES:
            raise UsageError("cannot sweep over '%s' (expected one of %s)" % (
                self.variable, ", ".join(VARIABLES)))
        if not self.values:
            raise UsageError("no values to sweep %s over" % self.variable)


def parse_values(text):
    """ Sweep values from 'a,b,c' or a 'start:stop:step' range"""
    text = text.strip()
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError("expected start:stop:step, got '%s'" % text)
        suffix = "%" if parts[0].endswith("%") else ""
        try:
            start, stop, step = (float(p.rstrip("%")) for p in parts)
        except ValueError:
            raise UsageError("invalid range '%s'" % text)
        if step <= 0:
            raise UsageError("range step must be positive")
        values = []
        n = 0
        while start + n * step <= stop + step * 1e-9:
            values.append("%s%s" % (round(start + n * step, 10), suffix))
            n += 1
        return values
    return [v.strip() for v in text.split(",") if v.strip()]


def run_sweep(advisor, spec):
    """ One advise run per value, summarised as a DataFrame"""
    fixed = dict(spec.fixed)
    rows = []
    for value in spec.values:
        args = dict(fixed)
        if spec.variable == MINSUP:
            args["minsup"] = value
        elif spec.variable == BUDGET:
            args["budget"] = value
        else:
            args["objective"] = "hybrid"
            args["alpha"] = float(value)
        run = advisor.advise(**args)
        config = run.configuration
        rows.append({
            "value": str(value),
            "candidates": len(run.candidates),
            "selected": len(config.selected),
            "total_bytes": config.total_bytes,
            "workload_cost": config.final_cost,
            "baseline_cost": config.baseline_cost,
            "cost_ratio": (config.final_cost / config.baseline_cost
                           if config.baseline_cost else 1.0),
            "selection": " ".join(config.ids),
        })
    return pd.DataFrame(rows, columns=COLUMNS)


def render_csv(table):
    return table.to_csv(index=False)


def render_json(table):
    return table.to_json(orient="records", indent=2) + "\n"


RENDERERS = {
    "csv": render_csv,
    "json": render_json,
}
