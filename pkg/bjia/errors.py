# ---------------------------------------------------------------------------
# Errors raised by bjia
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------


class AdvisorError(ValueError):
    """ Base class of the errors reported by bjia-cli as '<tag>: <message>'"""
    tag = "bjia"
    exit_code = 1

    def __str__(self):
        return "%s: %s" % (self.tag, super().__str__())


class UsageError(AdvisorError):
    tag = "cli"
    exit_code = 2


class CatalogError(AdvisorError):
    tag = "catalog"
    exit_code = 4


class WorkloadSyntaxError(AdvisorError):
    tag = "sqlparse"
    exit_code = 3

    def __init__(self, msg, statement=None, offset=None):
        if statement is not None:
            where = "statement %d" % statement
            if offset is not None:
                where = "%s, offset %d" % (where, offset)
            msg = "%s: %s" % (where, msg)
        super().__init__(msg)
        self.statement = statement
        self.offset = offset


class WorkloadValidationError(AdvisorError):
    tag = "sqlparse"
    exit_code = 3


class MinerError(AdvisorError):
    tag = "closeminer"
    exit_code = 2


class CostModelError(AdvisorError):
    tag = "costmodel"
    exit_code = 4
