"""Scalar primitives shared by the solvers.

Capacity function, positive part, a bracketing root finder and the dual
price search used by every water-filling style solver in the package.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

LN2 = math.log(2.0)


class IssError(Exception):
    """Base class for errors raised by this package."""


class BracketError(IssError, ValueError):
    """The supplied interval does not bracket a root."""


class ConvergenceError(IssError, RuntimeError):
    """An iterative search stopped without meeting its tolerance.

    ``best`` holds the best iterate found so far (or None).
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


@dataclass(frozen=True)
class Bracket:
    lo: float
    hi: float
    tol_x: float = 1e-10
    tol_f: float = 1e-9
    max_iter: int = 200

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError(f"bracket needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.tol_x <= 0 or self.tol_f <= 0:
            raise ValueError("tolerances must be positive")
        if self.max_iter < 1:
            raise ValueError("max_iter must be >= 1")


DUAL_BRACKET = Bracket(1e-12, 1.0)


def cap(x):
    """Capacity function log2(1 + x); works elementwise on arrays."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0) or np.any(np.isnan(arr)):
        raise ValueError("cap() is defined for x >= 0 only")
    out = np.log1p(arr) / LN2
    return float(out) if out.ndim == 0 else out


def _cap(x):
    # unchecked variant for hot loops
    return np.log1p(x) / LN2


def pos(x):
    """Positive part max(x, 0)."""
    out = np.maximum(x, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def bisect_root(f, b: Bracket) -> float:
    """Root of a monotone function by plain bisection.

    Stops as soon as ``|f(x)| <= b.tol_f`` or the bracket is narrower than
    ``b.tol_x``.
    """
    lo, hi = float(b.lo), float(b.hi)
    flo, fhi = f(lo), f(hi)
    if abs(flo) <= b.tol_f:
        return lo
    if abs(fhi) <= b.tol_f:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise BracketError(f"no sign change on [{lo}, {hi}]: f={flo}, {fhi}")

    best, fbest = (lo, flo) if abs(flo) < abs(fhi) else (hi, fhi)
    for _ in range(b.max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if abs(fmid) < abs(fbest):
            best, fbest = mid, fmid
        if abs(fmid) <= b.tol_f or hi - lo <= b.tol_x:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi = mid
    raise ConvergenceError(
        f"bisection did not converge in {b.max_iter} iterations", best=best)


def _expand_dual_bracket(total_power_at, budget, b):
    lo, hi = b.lo, b.hi
    p_lo = total_power_at(lo)
    if p_lo < budget:
        raise ConvergenceError(
            f"budget {budget} unreachable: total power {p_lo} at price {lo}", best=lo)
    p_hi = total_power_at(hi)
    for _ in range(b.max_iter):
        if p_hi <= budget:
            return lo, hi, p_lo, p_hi
        lo, p_lo = hi, p_hi
        hi *= 2.0
        p_hi = total_power_at(hi)
    raise ConvergenceError("could not find a dual price with power below budget", best=hi)


def dual_bisect(total_power_at, budget: float, b: Bracket = DUAL_BRACKET) -> float:
    """Dual price at which a nonincreasing power map meets ``budget``.

    ``total_power_at`` maps a price to the (average) power it induces. The
    upper end of the bracket is doubled until the power falls below the
    budget. The search runs on the log of the price; ``b.tol_x`` is a
    relative width and ``b.tol_f`` is relative to the budget.
    """
    if not budget > 0:
        raise ValueError("budget must be positive")
    lo, hi, p_lo, p_hi = _expand_dual_bracket(total_power_at, budget, b)
    tol = b.tol_f * budget
    if abs(p_lo - budget) <= tol:
        return lo
    if abs(p_hi - budget) <= tol:
        return hi

    def g(t):
        return total_power_at(math.exp(t)) - budget

    t = optimize.brentq(g, math.log(lo), math.log(hi), xtol=1e-14, rtol=4 * np.finfo(float).eps,
                        maxiter=b.max_iter)
    lam = math.exp(t)
    if abs(total_power_at(lam) - budget) <= tol:
        return lam

    # brentq can land on a kink without meeting the residual; bisect instead
    best, rbest = lo, abs(p_lo - budget)
    for _ in range(b.max_iter):
        mid = math.sqrt(lo * hi)
        r = total_power_at(mid) - budget
        if abs(r) < rbest:
            best, rbest = mid, abs(r)
        if abs(r) <= tol:
            return mid
        if hi / lo - 1.0 <= b.tol_x * 1e-5 or mid in (lo, hi):
            break
        if r > 0:
            lo = mid
        else:
            hi = mid
    raise ConvergenceError(
        f"dual search stalled with power residual {rbest:.3e} (tolerance {tol:.3e})", best=best)
