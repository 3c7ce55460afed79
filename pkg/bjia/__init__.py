# ---------------------------------------------------------------------------
# bjia module
# ---------------------------------------------------------------------------
#
# This software is a part of bjia.
#
# ---------------------------------------------------------------------------
# SPDX-License-Identifier: MIT
# ---------------------------------------------------------------------------

from .__version__ import __version__

__license__ = 'MIT'

__all__ = ['__version__']
