"""Corpus analytics: lexical scores, semantic co-occurrence networks,
graph metrics, random-graph benchmarks and nonparametric tests.

The heavy lifting lives in the compiled ``lexnet._core`` extension; this
package re-exports its public surface.
"""

from ._core import *  # noqa: F401,F403
from ._core import __doc__ as _core_doc  # noqa: F401

__version__ = "0.1.0"
