"""Halfspace-illumination depth: depth regions, illumination, elliptical
estimators, extreme regions, robust classification and experiments."""

from ._core import *  # noqa: F401,F403
from ._core import __doc__  # noqa: F401
