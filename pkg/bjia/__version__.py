# ---------------------------------------------------------------------------
# bjia version
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

__license__ = 'MIT'
__version__ = '0.1'
