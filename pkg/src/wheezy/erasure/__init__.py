"""
"""

from wheezy.erasure.composite import (
    check_composite_erasure,
    validate_soundness_theorem,
)
from wheezy.erasure.composition import check_liveness, compose
from wheezy.erasure.dsl import load, loads
from wheezy.erasure.system import check_input_erasure, check_system_well_formed
from wheezy.erasure.user import check_erasure_friendly

__all__ = (
    "check_composite_erasure",
    "check_erasure_friendly",
    "check_input_erasure",
    "check_liveness",
    "check_system_well_formed",
    "compose",
    "load",
    "loads",
    "validate_soundness_theorem",
)
__version__ = "0.1"
