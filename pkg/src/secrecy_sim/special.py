"""Exponential integral E1 with an overflow-safe scaled variant.

E1(x) = integral from x to infinity of exp(-t)/t dt, for x > 0.

Two evaluation regimes, standard for this function:

* x <= 1: power series
      E1(x) = -euler_gamma - ln(x) + sum_{k>=1} (-1)^(k+1) x^k / (k * k!)
* x > 1: continued fraction (modified Lentz)
      exp(x) E1(x) = 1 / (x+1 - 1/(x+3 - 4/(x+5 - 9/(x+7 - ...))))

The continued fraction natively produces the scaled product exp(x)*E1(x),
which is what the closed-form intercept expressions consume.  Computing the
product this way never overflows, no matter how large x gets; the unscaled
e1(x) simply underflows to 0 once exp(-x) leaves the representable range.

Analytic envelope, used both as a sanity bracket and in the high-SNR
diversity argument:

    0.5 * exp(-x) * ln(1 + 2/x)  <=  E1(x)  <=  exp(-x) * ln(1 + 1/x)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = ["E1Bounds", "e1", "e1_scaled", "e1_bounds"]

EULER_GAMMA = 0.5772156649015328606

_SERIES_CUTOFF = 1.0
_CF_MAX_ITER = 400
_CF_EPS = 1e-15


@dataclass(frozen=True)
class E1Bounds:
    """Analytic lower/upper bracket for E1 at one argument.

    Both endpoints are positive for any representable argument, but underflow
    to 0.0 together with E1 itself once exp(-x) is subnormal-zero.
    """

    lower: float
    upper: float

    def __post_init__(self):
        if not (0.0 <= self.lower <= self.upper):
            raise ValueError(f"invalid bracket [{self.lower}, {self.upper}]")

    def contains(self, value: float) -> bool:
        return self.lower <= value <= self.upper


def _check_positive(x: np.ndarray) -> None:
    if x.size and not np.all(x > 0.0):
        bad = float(np.min(x)) if x.size else float("nan")
        raise ValueError(f"E1 argument must be positive, got {bad}")


def _series_e1(x: np.ndarray) -> np.ndarray:
    """Unscaled E1 via the alternating power series; valid for 0 < x <= 1."""
    total = -EULER_GAMMA - np.log(x)
    term = np.ones_like(x)
    for k in range(1, 40):
        term = term * x / k
        contrib = term / k
        if k % 2 == 1:
            total = total + contrib
        else:
            total = total - contrib
        if np.all(contrib < 1e-18):
            break
    return total


def _lentz_e1_scaled(x: np.ndarray) -> np.ndarray:
    """Scaled exp(x)*E1(x) via modified Lentz; valid for x > 1."""
    tiny = 1e-300
    b = x + 1.0
    c = np.full_like(x, 1.0 / tiny)
    d = 1.0 / b
    f = d.copy()
    done = np.zeros(x.shape, dtype=bool)
    for n in range(1, _CF_MAX_ITER + 1):
        a = -float(n * n)
        b = b + 2.0
        d = a * d + b
        d = np.where(np.abs(d) < tiny, tiny, d)
        c = b + a / c
        c = np.where(np.abs(c) < tiny, tiny, c)
        d = 1.0 / d
        delta = c * d
        f = np.where(done, f, f * delta)
        done |= np.abs(delta - 1.0) < _CF_EPS
        if done.all():
            return f
    raise RuntimeError("continued fraction for E1 failed to converge")


def _e1_scaled_array(x: np.ndarray) -> np.ndarray:
    out = np.empty_like(x)
    small = x <= _SERIES_CUTOFF
    if small.any():
        xs = x[small]
        out[small] = np.exp(xs) * _series_e1(xs)
    if (~small).any():
        out[~small] = _lentz_e1_scaled(x[~small])
    return out


def e1(x: float) -> float:
    """Exponential integral E1(x) for x > 0.

    Underflows gracefully to 0.0 for arguments beyond ~745 where exp(-x)
    is no longer representable.
    """
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 0:
        raise TypeError("e1 takes a scalar; use e1_scaled for arrays")
    arr = arr.reshape(1)
    _check_positive(arr)
    if arr[0] <= _SERIES_CUTOFF:
        return float(_series_e1(arr)[0])
    return float(math.exp(-arr[0]) * _lentz_e1_scaled(arr)[0])


def e1_scaled(x):
    """exp(x) * E1(x), computed without overflow for any positive x.

    Accepts a scalar or ndarray.  Strictly decreasing, with
    0.5*ln(1 + 2/x) <= e1_scaled(x) <= ln(1 + 1/x) and x*e1_scaled(x) -> 1
    as x -> infinity.
    """
    arr = np.asarray(x, dtype=float)
    scalar = arr.ndim == 0
    flat = np.atleast_1d(arr)
    _check_positive(flat)
    out = _e1_scaled_array(flat)
    return float(out[0]) if scalar else out.reshape(arr.shape)


def e1_bounds(x: float) -> E1Bounds:
    """Analytic bracket [0.5 e^-x ln(1+2/x), e^-x ln(1+1/x)] around E1(x)."""
    xf = float(x)
    if not xf > 0.0:
        raise ValueError(f"E1 argument must be positive, got {xf}")
    damp = math.exp(-xf)
    return E1Bounds(
        lower=0.5 * damp * math.log1p(2.0 / xf),
        upper=damp * math.log1p(1.0 / xf),
    )
