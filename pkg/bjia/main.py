# ---------------------------------------------------------------------------
# bjia main
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

# System imports
import configparser
import importlib
import math
import os
import sys
from fractions import Fraction

# Local imports
from bjia import __version__
from bjia.candidates import build_candidate_set, make_candidate
from bjia.catalog import SystemParams, load_catalog
from bjia.costmodel import CostModel
from bjia.errors import AdvisorError, UsageError, WorkloadValidationError
from bjia.miner.itemset import check_minsup
from bjia.report import RENDERERS, AdvisorRun
from bjia.selector import ObjectiveKind, greedy_select, price_configuration
from bjia.sweep import run_sweep
from bjia.workload import (QualifiedAttribute, build_matrix, load_workload,
                           validate_workload)

_NOPRINT_TRANS_TABLE = {
    i: '.' for i in range(0, sys.maxunicode + 1) if not chr(i).isprintable()
}

DEFAULT_MINSUP = Fraction(1, 10)
DEFAULT_MINER = 'close'
DEFAULT_OBJECTIVE = 'profit'
DEFAULT_FORMAT = 'text'

_SUFFIXES = {'K': 1 << 10, 'M': 1 << 20, 'G': 1 << 30}


def _make_printable(s):
    return s.translate(_NOPRINT_TRANS_TABLE)


def parse_budget(value):
    """ Budget from bytes, a K/M/G suffixed size or a percentage

    Returns (bytes, None) or (None, fraction) for a percentage of the space
    taken by all candidates.
    """
    if value is None:
        return None, None
    if isinstance(value, int):
        return value, None
    text = str(value).strip().upper()
    try:
        if text.endswith('%'):
            share = Fraction(text[:-1]) / 100
            if not 0 <= share <= 1:
                raise UsageError("budget %s out of range [0%%, 100%%]" %
                                 value)
            return None, share
        scale = 1
        if text[-1:] in _SUFFIXES:
            scale = _SUFFIXES[text[-1]]
            text = text[:-1]
        size = Fraction(text) * scale
    except (ValueError, ZeroDivisionError):
        raise UsageError("invalid budget '%s'" % value)
    if size < 0:
        raise UsageError("budget must not be negative")
    return math.floor(size), None


def parse_attribute(text):
    parts = text.strip().split('.')
    if len(parts) != 2 or not all(parts):
        raise UsageError("expected Table.attribute, got '%s'" % text)
    return QualifiedAttribute(parts[0], parts[1])


class BitmapJoinIndexAdvisor:

    def __init__(self):
        self.config_files = ['bjia.ini']
        self.debug_level = 0
        self.params = SystemParams()
        self.miner = None
        self.minsup = DEFAULT_MINSUP
        self.objective = DEFAULT_OBJECTIVE
        self.alpha = None
        self.budget = None
        self.maintenance_weight = 0.0
        self.max_per_table = None
        self.report_format = DEFAULT_FORMAT
        self.lenient = False
        self.keys_from_metadata = False
        self.catalog = None
        self.queries = None
        self.costs = None
        self.schema_path = None
        self.workload_path = None
        self._mined = {}
        self.version = __version__

        # Config file in $HOME/.bjia/config
        home = os.getenv('HOME', '')
        if home != '':
            self.config_files.append(os.path.join(home, '.bjia', 'config'))

        # Config file in /etc/bjia/config
        if os.path.exists('/etc'):
            self.config_files.append(os.path.join('/etc', 'bjia', 'config'))

    def debug(self, level, msg):
        if self.debug_level >= level:
            if self.debug_level == 0:
                prefix = "# "
            else:
                prefix = "# debug%d: " % level
            msg = str(msg).replace("\n", "\n%s ... " % prefix)
            lines = msg.splitlines()
            for line in lines:
                line = _make_printable(line)
                print("%s%s" % (prefix, line), file=sys.stderr)

    def load_config(self):
        self.debug(3, "main.load_config()")

        parser = configparser.ConfigParser()
        parser.read(self.config_files)
        try:
            if parser.has_section('main'):
                self.load_main_config(parser)
            if parser.has_section('params'):
                self.load_params_config(parser)
            if parser.has_section('miner'):
                self.load_miner_config(parser)
            if parser.has_section('objective'):
                self.load_objective_config(parser)
            if parser.has_section('selector'):
                self.load_selector_config(parser)
            if parser.has_section('report'):
                self.load_report_config(parser)
        except AdvisorError:
            raise
        except ValueError as e:
            raise UsageError("invalid configuration: %s" % e)

        # Allow override from the environment
        debug = os.getenv('BJIA_DEBUG')
        if debug is not None:
            try:
                self.debug_level = int(debug)
            except ValueError:
                raise UsageError("invalid BJIA_DEBUG value '%s'" % debug)

        if self.miner is None:
            self.load_miner(DEFAULT_MINER)

    def load_main_config(self, parser):
        self.debug(3, "main.load_main_config()")

        self.debug_level = int(
            parser.get('main', 'debug', fallback=self.debug_level))

    def load_params_config(self, parser):
        self.debug(3, "main.load_params_config()")

        self.params = SystemParams(
            parser.getint('params', 'page_size',
                          fallback=self.params.page_size_bytes),
            parser.getint('params', 'pointer_size',
                          fallback=self.params.pointer_size_bytes))

    def load_miner_config(self, parser):
        self.debug(3, "main.load_miner_config()")

        minsup = parser.get('miner', 'minsup', fallback=None)
        if minsup is not None:
            self.minsup = check_minsup(minsup)
        variant = parser.get('miner', 'variant', fallback=DEFAULT_MINER)
        self.load_miner(variant, dict(parser.items('miner')))

    def load_miner(self, variant, conf=None):
        self.debug(3, "main.load_miner()")

        try:
            # Try loading its support class
            mod = importlib.import_module("bjia.miner." + variant)
            factory = getattr(mod, 'instantiate')
        except (ImportError, AttributeError):
            raise UsageError('miner "%s" could not be found/loaded!' % (
                             variant))
        self.miner = factory(self)
        self.miner.variant = variant
        # Configure the miner
        self.miner.configure(conf or {})
        self._mined = {}

    def load_objective_config(self, parser):
        self.debug(3, "main.load_objective_config()")

        self.objective = parser.get('objective', 'variant',
                                    fallback=self.objective)
        self.budget = parser.get('objective', 'budget', fallback=self.budget)
        alpha = parser.get('objective', 'alpha', fallback=None)
        if alpha is not None:
            self.alpha = float(alpha)
        self.maintenance_weight = parser.getfloat(
            'objective', 'maintenance_weight',
            fallback=self.maintenance_weight)

    def load_selector_config(self, parser):
        self.debug(3, "main.load_selector_config()")

        limit = parser.get('selector', 'max_per_table', fallback=None)
        if limit is not None and limit.strip().lower() != 'unlimited':
            self.max_per_table = int(limit)

    def load_report_config(self, parser):
        self.debug(3, "main.load_report_config()")

        self.report_format = parser.get('report', 'format',
                                        fallback=self.report_format)
        if self.report_format not in RENDERERS:
            raise UsageError("unknown report format '%s'" % (
                             self.report_format))

    def load_inputs(self, schema, workload):
        self.debug(3, "main.load_inputs()")

        self.catalog = load_catalog(schema, self.params)
        queries = load_workload(workload, self.lenient, self)
        self.queries = validate_workload(queries, self.catalog)
        self.costs = CostModel(self, self.catalog, self.queries)
        self.schema_path = schema
        self.workload_path = workload
        self._mined = {}

        self.debug(2, "%d queries, %d dimensions" % (
                   len(self.queries), len(self.catalog.dimensions)))
        self.debug(3, "main.load_inputs(): %d queries" % len(self.queries))

    def matrix(self):
        return build_matrix(self.queries, self.catalog,
                            self.keys_from_metadata)

    def mine(self, minsup=None):
        """ Query-attribute matrix, closed itemsets and candidates at minsup"""
        self.debug(3, "main.mine()")

        minsup = check_minsup(self.minsup if minsup is None else minsup)
        if minsup not in self._mined:
            m = self.matrix()
            self.debug(2, "matrix: %d queries x %d attributes" % m.shape)
            itemsets = self.miner.mine(m, minsup)
            candidates = build_candidate_set(itemsets, self.catalog)
            self.debug(2, "minsup %s: %d closed itemsets, %d candidates" % (
                       minsup, len(itemsets), len(candidates)))
            for r in candidates.rejections:
                self.debug(4, "rejected %s: %s" % (r.itemset.names(),
                                                   r.reason))
            self._mined[minsup] = (m, itemsets, candidates)

        result = self._mined[minsup]
        self.debug(3, "main.mine(): %d candidates" % len(result[2]))
        return result

    def objective_kind(self, candidates, objective=None, budget=None,
                       alpha=None, maintenance_weight=None):
        kind = self.objective if objective is None else objective
        budget = self.budget if budget is None else budget
        alpha = self.alpha if alpha is None else alpha
        if maintenance_weight is None:
            maintenance_weight = self.maintenance_weight

        size, share = parse_budget(budget)
        if share is not None:
            footprint = sum(self.costs.size(i) for i in candidates)
            size = math.floor(share * footprint)
        return ObjectiveKind(kind, alpha, size, maintenance_weight)

    def advise(self, minsup=None, objective=None, budget=None, alpha=None):
        self.debug(3, "main.advise()")

        if self.catalog is None:
            raise UsageError("no catalog/workload loaded")
        m, itemsets, candidates = self.mine(minsup)
        given = self.budget if budget is None else budget
        kind = self.objective_kind(candidates, objective, given, alpha)
        config = greedy_select(candidates, self.queries, self.catalog, kind,
                               self.max_per_table, self, self.costs)
        unpruned = price_configuration(candidates, self.costs)

        inputs = {
            "workload": self.workload_path,
            "schema": self.schema_path,
            "origin": self.catalog.origin,
            "miner": getattr(self.miner, 'variant', None),
            "minsup": str(check_minsup(
                self.minsup if minsup is None else minsup)),
            "objective": kind.kind,
            "alpha": kind.alpha,
            "budget": None if given is None else str(given),
            "budget_bytes": kind.budget_bytes,
            "max_per_table": self.max_per_table,
            "maintenance_weight": kind.maintenance_weight,
            "lenient": self.lenient,
            "keys_from_metadata": self.keys_from_metadata,
        }
        run = AdvisorRun(inputs, self.catalog, m, itemsets, candidates,
                         config, unpruned,
                         self.costs.per_query(config.selected),
                         [self.costs.maintenance(i) for i in config.selected])

        self.debug(3, "main.advise(): %s" % config.ids)
        return run

    def cost(self, indexes=()):
        """ Per-query costs under a configuration given as On attribute lists

        Each entry of indexes is a sequence of 'Table.attribute' strings
        naming the On clause of one index.
        """
        self.debug(3, "main.cost()")

        config = []
        for on in indexes:
            attrs = []
            for a in on:
                qa = parse_attribute(a)
                if self.catalog.dimension(qa.table) is None or \
                        self.catalog.attribute(qa.table, qa.attribute) is None:
                    raise WorkloadValidationError(
                        "unknown dimension attribute %s" % qa)
                attrs.append(qa)
            i = make_candidate(attrs, self.catalog)
            if i is None:
                raise WorkloadValidationError(
                    "index on %s: dimension not joined to %s" % (
                        ", ".join(on), self.catalog.fact.name))
            config.append(i)

        result = price_configuration(config, self.costs)
        self.debug(3, "main.cost(): %.2f" % result.final_cost)
        return result, self.costs.per_query(config)

    def sweep(self, spec):
        self.debug(3, "main.sweep()")

        result = run_sweep(self, spec)

        self.debug(3, "main.sweep(): %d rows" % len(result))
        return result

