"""Monotone scale functions against which all operators integrate.

A :class:`ScaleFunction` bundles the map t -> psi(t), its derivative,
the right domain endpoint b, and (optionally) a closed-form inverse.
Validity is sample-checked on a 128-point grid at construction: the
derivative must be strictly positive and the function strictly
increasing there.  User-supplied callables must be vectorized over
numpy arrays and side-effect free; both are documented contracts, not
runtime checks.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .errors import DomainError, UnknownNameError

__all__ = ["ScaleFunction", "register_builtin", "scale_inverse", "BUILTIN_NAMES"]

_VALIDATION_POINTS = 128
_BISECT_STEPS = 90


@dataclass(frozen=True)
class ScaleFunction:
    """A smooth strictly increasing scale on [0, b] with derivative access."""

    eval: Callable
    deriv: Callable
    domain_end: float
    inverse: Callable | None = None
    name: str = "custom"
    psi0: float = field(init=False, default=0.0)

    def __post_init__(self):
        b = float(self.domain_end)
        if not b > 0.0:
            raise DomainError("domain_end must be positive")
        ts = np.linspace(b / _VALIDATION_POINTS, b, _VALIDATION_POINTS)
        vals = np.asarray(self.eval(ts), dtype=float)
        ders = np.asarray(self.deriv(ts), dtype=float)
        if not np.all(np.isfinite(vals)) or not np.all(np.isfinite(ders)):
            raise DomainError(f"scale '{self.name}' is not finite on (0, {b}]")
        if not np.all(ders > 0.0):
            raise DomainError(f"scale '{self.name}' needs a positive derivative")
        if not np.all(np.diff(vals) > 0.0):
            raise DomainError(f"scale '{self.name}' is not strictly increasing")
        if self.inverse is not None:
            back = np.asarray(self.inverse(vals), dtype=float)
            if np.any(np.abs(back - ts) > 1e-12 * (1.0 + np.abs(ts))):
                raise DomainError(f"inverse of scale '{self.name}' fails round-trip")
        object.__setattr__(self, "psi0", float(self.eval(0.0)))

    def delta(self, t):
        """psi(t) - psi(0), the natural progress variable."""
        return self.eval(t) - self.psi0

    def __repr__(self):  # keep reports compact
        return f"ScaleFunction({self.name!r}, b={self.domain_end})"


def _make_builtins(b: float) -> dict[str, ScaleFunction]:
    return {
        "identity": ScaleFunction(
            eval=lambda t: np.asarray(t, dtype=float) + 0.0,
            deriv=lambda t: np.ones_like(np.asarray(t, dtype=float)),
            inverse=lambda v: np.asarray(v, dtype=float) + 0.0,
            domain_end=b,
            name="identity",
        ),
        "shifted_log": ScaleFunction(
            eval=lambda t: np.log1p(np.asarray(t, dtype=float)),
            deriv=lambda t: 1.0 / (1.0 + np.asarray(t, dtype=float)),
            inverse=lambda v: np.expm1(np.asarray(v, dtype=float)),
            domain_end=b,
            name="shifted_log",
        ),
        "exp_minus_one": ScaleFunction(
            eval=lambda t: np.expm1(np.asarray(t, dtype=float)),
            deriv=lambda t: np.exp(np.asarray(t, dtype=float)),
            inverse=lambda v: np.log1p(np.asarray(v, dtype=float)),
            domain_end=b,
            name="exp_minus_one",
        ),
        "sqrt_shift": ScaleFunction(
            # sqrt(1+t) - 1 in cancellation-free form: stays exact near t = 0
            eval=lambda t: np.asarray(t, dtype=float)
            / (np.sqrt(np.asarray(t, dtype=float) + 1.0) + 1.0),
            deriv=lambda t: 0.5 / np.sqrt(np.asarray(t, dtype=float) + 1.0),
            # (v+1)^2 - 1 written to stay accurate near v = 0
            inverse=lambda v: np.asarray(v, dtype=float)
            * (np.asarray(v, dtype=float) + 2.0),
            domain_end=b,
            name="sqrt_shift",
        ),
        # no closed-form inverse registered: exercises the bisection path
        "cubic_mono": ScaleFunction(
            eval=lambda t: np.asarray(t, dtype=float) ** 3 / 3.0
            + np.asarray(t, dtype=float),
            deriv=lambda t: np.asarray(t, dtype=float) ** 2 + 1.0,
            domain_end=b,
            name="cubic_mono",
        ),
    }


BUILTIN_NAMES = ("identity", "shifted_log", "exp_minus_one", "sqrt_shift", "cubic_mono")


def register_builtin(name: str, domain_end: float = 1.0) -> ScaleFunction:
    """Return a validated builtin scale function on [0, domain_end]."""
    try:
        return _make_builtins(float(domain_end))[name]
    except KeyError:
        raise UnknownNameError(
            f"unknown scale '{name}'; choose one of {BUILTIN_NAMES}"
        ) from None


def scale_inverse(psi: ScaleFunction, v):
    """Solve psi(t) = v on [0, b] to |psi(t) - v| <= 1e-13 (1 + |v|).

    Uses the registered closed-form inverse when present; otherwise
    bisection (followed by one Newton polish step, which also keeps the
    result a smooth function of v for finite differencing).
    """
    varr = np.asarray(v, dtype=float)
    scalar = varr.ndim == 0
    varr = np.atleast_1d(varr)
    lo_v = psi.psi0
    hi_v = float(psi.eval(psi.domain_end))
    slack = 1e-12 * (1.0 + np.abs(varr))
    if np.any(varr < lo_v - slack) or np.any(varr > hi_v + slack):
        raise DomainError("scale_inverse: value outside [psi(0), psi(b)]")
    varr = np.clip(varr, lo_v, hi_v)
    if psi.inverse is not None:
        out = np.asarray(psi.inverse(varr), dtype=float)
    else:
        lo = np.zeros_like(varr)
        hi = np.full_like(varr, psi.domain_end)
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            below = np.asarray(psi.eval(mid), dtype=float) < varr
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        out = 0.5 * (lo + hi)
        out -= (np.asarray(psi.eval(out), dtype=float) - varr) / np.asarray(
            psi.deriv(out), dtype=float
        )
        out = np.clip(out, 0.0, psi.domain_end)
    return float(out[0]) if scalar else out
