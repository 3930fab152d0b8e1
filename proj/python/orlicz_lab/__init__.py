"""Thin-shell concentration on Orlicz balls."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401

BOUND_NAMES = (
    "chebyshev",
    "thmB",
    "thmC",
    "bernstein-i",
    "bernstein-ii",
    "expectation",
    "thmD-upper",
    "thmD-lower",
    "lee-vempala",
    "guedon-milman",
    "schechtman-zinn",
)
