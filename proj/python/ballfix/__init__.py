"""Fixed point solvers and condition checkers for ball spaces."""

from fractions import Fraction

from ._core import (
    BallfixError,
    check_topn,
    conditions,
    hensel_lift,
    run_scenario,
    solve_ball_space,
    solve_oag,
    sweep,
)
from ._core import solve_banach as _solve_banach

__all__ = [
    "BallfixError",
    "check_topn",
    "conditions",
    "hensel_lift",
    "run_scenario",
    "solve_ball_space",
    "solve_banach",
    "solve_oag",
    "sweep",
]


def _text(q):
    return str(Fraction(q))


def solve_banach(A, b, C, x0, eps):
    """Iterate x -> A x + b from x0 until the certificate radius is at most eps.

    Entries may be ints, strings or Fractions. Returns the last iterate and
    the certificate ball with Fraction coordinates.
    """
    rows = "; ".join(", ".join(_text(a) for a in row) + ", " + _text(bi) for row, bi in zip(A, b))
    r = _solve_banach(rows, _text(C), ", ".join(_text(v) for v in x0), _text(eps))
    return {
        "x": [Fraction(v) for v in r["x"]],
        "center": [Fraction(v) for v in r["center"]],
        "radius": Fraction(r["radius"]),
        "iterations": r["iterations"],
    }
