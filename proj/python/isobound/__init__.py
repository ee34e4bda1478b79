"""Isogeny-distinguishing prime bounds and 2-adic deviation groups.

The heavy lifting lives in the compiled extension; this package just
re-exports its public surface.
"""

from ._core import (
    AP_CAP,
    Curve,
    analyze_rep_pair,
    bound_for_case,
    classify_pair,
    collapsed_bound,
    distinguishing_prime,
    isogeny_bound,
    mod2_isomorphic,
    quadratic_twist,
    serre_bound,
    verify_suite,
    __version__,
)

__all__ = [
    "AP_CAP",
    "Curve",
    "analyze_rep_pair",
    "bound_for_case",
    "classify_pair",
    "collapsed_bound",
    "distinguishing_prime",
    "isogeny_bound",
    "mod2_isomorphic",
    "quadratic_twist",
    "serre_bound",
    "verify_suite",
    "__version__",
]
