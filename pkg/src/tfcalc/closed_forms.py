"""Exact images of the power and constant families under the operators.

Three families have closed forms:

* weighted powers  e^(-lam D) D^xi           (D = psi(t) - psi(0)),
  mapped within the family with Gamma-ratio coefficients;
* bare powers      D^xi, mapped to Kummer-function expressions;
* constants        1, mapped to Mittag-Leffler expressions.

These serve as oracles for the quadrature operators and, through
:class:`WeightedPowerSum`, as an exact algebra for nested operator
evaluation in the identity harness.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import DomainError, PreconditionError
from .operators import FunctionHandle, OrderParams
from .scale import ScaleFunction
from .specfun import (
    gamma,
    kummer_1f1,
    kummer_1f1_regularized,
    mittag_leffler,
    reciprocal_gamma,
)

__all__ = [
    "PowerFamilyTerm",
    "WeightedPowerSum",
    "weighted_power_integral",
    "weighted_power_rl_derivative",
    "weighted_power_caputo_derivative",
    "bare_power_integral_kummer",
    "bare_power_integral_kummer_alt",
    "bare_power_rl_derivative_kummer",
    "constant_operators",
    "ConstantOperators",
]


@dataclass(frozen=True)
class PowerFamilyTerm:
    """One term c * D^xi, optionally carrying the e^(-lam D) weight."""

    coeff: float
    xi: float
    weighted: bool = True

    def __post_init__(self):
        if not self.xi > -1.0:
            raise DomainError("power exponent xi must exceed -1")


def _delta(psi: ScaleFunction, t):
    tarr = np.asarray(t, dtype=float)
    if np.any(np.atleast_1d(tarr) < 0.0) or np.any(
        np.atleast_1d(tarr) > psi.domain_end * (1 + 1e-12)
    ):
        raise DomainError("evaluation point outside [0, b]")
    return np.asarray(psi.eval(tarr), dtype=float) - psi.psi0


def _check_xi(xi: float):
    if not xi > -1.0:
        raise PreconditionError("xi must exceed -1")


def _pow_delta(delta, expo):
    """delta**expo with the 0-point convention of the closed forms."""
    d = np.asarray(delta, dtype=float)
    zero = d == 0.0
    if np.any(zero):
        if expo > 0.0:
            return np.where(zero, 0.0, np.power(np.where(zero, 1.0, d), expo))
        raise DomainError("closed form undefined at t = 0 for this exponent")
    return np.power(d, expo)


def weighted_power_integral(p: OrderParams, xi: float, psi: ScaleFunction, t):
    """I[alpha, lam] applied to e^(-lam D) D^xi."""
    _check_xi(xi)
    d = _delta(psi, t)
    coeff = gamma(xi + 1.0) / gamma(xi + p.alpha + 1.0)
    return coeff * np.exp(-p.lam * d) * _pow_delta(d, xi + p.alpha)


def weighted_power_rl_derivative(p: OrderParams, xi: float, psi: ScaleFunction, t):
    """RL-type derivative of e^(-lam D) D^xi; exactly 0 when xi = alpha - k."""
    _check_xi(xi)
    d = _delta(psi, t)
    coeff = gamma(xi + 1.0) * reciprocal_gamma(xi - p.alpha + 1.0)
    if coeff == 0.0:
        return np.zeros_like(d) if np.ndim(d) else 0.0
    return coeff * np.exp(-p.lam * d) * _pow_delta(d, xi - p.alpha)


def weighted_power_caputo_derivative(p: OrderParams, xi: float, psi: ScaleFunction, t):
    """Caputo-type derivative of e^(-lam D) D^xi, valid for xi > floor(alpha)."""
    _check_xi(xi)
    if not xi > math.floor(p.alpha):
        raise PreconditionError(
            f"Caputo power rule needs xi > floor(alpha) = {math.floor(p.alpha)}"
        )
    return weighted_power_rl_derivative(p, xi, psi, t)


def bare_power_integral_kummer(p: OrderParams, xi: float, psi: ScaleFunction, t):
    """I[alpha, lam] D^xi via 1F1(xi+1; xi+alpha+1; lam D)."""
    _check_xi(xi)
    d = _delta(psi, t)
    coeff = gamma(xi + 1.0) / gamma(xi + p.alpha + 1.0)
    return (
        coeff
        * _pow_delta(d, xi + p.alpha)
        * np.exp(-p.lam * d)
        * kummer_1f1(xi + 1.0, xi + p.alpha + 1.0, p.lam * d)
    )


def bare_power_integral_kummer_alt(p: OrderParams, xi: float, psi: ScaleFunction, t):
    """Same image via the exponential-free form 1F1(alpha; xi+alpha+1; -lam D)."""
    _check_xi(xi)
    d = _delta(psi, t)
    coeff = gamma(xi + 1.0) / gamma(xi + p.alpha + 1.0)
    return (
        coeff
        * _pow_delta(d, xi + p.alpha)
        * kummer_1f1(p.alpha, xi + p.alpha + 1.0, -p.lam * d)
    )


def _near_nonpositive_integer(c: float) -> bool:
    return c < 0.5 and abs(c - round(c)) < 1e-8 and round(c) <= 0.0


def bare_power_rl_derivative_kummer(p: OrderParams, xi: float, psi: ScaleFunction, t):
    """RL-type derivative of D^xi.

    Uses 1F1(xi+1; xi-alpha+1; lam D); when the denominator parameter
    degenerates to a non-positive integer the alternative form with a
    termwise-regularized series takes over.
    """
    _check_xi(xi)
    d = _delta(psi, t)
    c = xi - p.alpha + 1.0
    if _near_nonpositive_integer(c):
        return (
            gamma(xi + 1.0)
            * _pow_delta(d, xi - p.alpha)
            * kummer_1f1_regularized(-p.alpha, c, -p.lam * d)
        )
    return (
        gamma(xi + 1.0)
        / gamma(c)
        * _pow_delta(d, xi - p.alpha)
        * np.exp(-p.lam * d)
        * kummer_1f1(xi + 1.0, c, p.lam * d)
    )


class ConstantOperators(NamedTuple):
    integral: float
    rl: float
    caputo: float


def constant_operators(p: OrderParams, psi: ScaleFunction, t) -> ConstantOperators:
    """Images of y = 1 under integral, RL and Caputo operators."""
    d = _delta(psi, t)
    if np.any(np.atleast_1d(d) <= 0.0):
        raise DomainError("constant closed forms need t > 0")
    z = p.lam * d
    damp = np.exp(-z)
    n = p.n
    return ConstantOperators(
        integral=damp * d**p.alpha * mittag_leffler(1.0, 1.0 + p.alpha, z),
        rl=damp * d ** (-p.alpha) * mittag_leffler(1.0, 1.0 - p.alpha, z),
        caputo=p.lam**n * damp * d ** (n - p.alpha)
        * mittag_leffler(1.0, n + 1.0 - p.alpha, z),
    )


@dataclass(frozen=True)
class WeightedPowerSum:
    """e^(-lam D) sum_i c_i D^(xi_i): the family every operator maps to itself.

    The transform rules are exact, so arbitrarily nested operator
    compositions on this family can be evaluated without quadrature.
    Terms with zero coefficient are dropped on construction.
    """

    terms: tuple[tuple[float, float], ...]  # (coeff, xi) pairs

    @staticmethod
    def of(*terms) -> "WeightedPowerSum":
        return WeightedPowerSum(tuple((float(c), float(x)) for c, x in terms))

    def __post_init__(self):
        kept = tuple((c, x) for c, x in self.terms if c != 0.0)
        object.__setattr__(self, "terms", kept)

    def _require_integrable(self, what: str):
        # exponents <= -1 are evaluable pointwise but not operator-admissible
        for _, x in self.terms:
            if not x > -1.0:
                raise PreconditionError(f"{what} needs every exponent > -1")

    def integral(self, alpha: float) -> "WeightedPowerSum":
        self._require_integrable("fractional integral")
        return WeightedPowerSum.of(
            *(
                (c * gamma(x + 1.0) / gamma(x + alpha + 1.0), x + alpha)
                for c, x in self.terms
            )
        )

    def rl(self, alpha: float) -> "WeightedPowerSum":
        self._require_integrable("RL derivative")
        return WeightedPowerSum.of(
            *(
                (c * gamma(x + 1.0) * reciprocal_gamma(x - alpha + 1.0), x - alpha)
                for c, x in self.terms
            )
        )

    def caputo(self, alpha: float) -> "WeightedPowerSum":
        self._require_integrable("Caputo derivative")
        out = []
        floor_a = math.floor(alpha)
        for c, x in self.terms:
            if x > floor_a:
                out.append((c * gamma(x + 1.0) * reciprocal_gamma(x - alpha + 1.0),
                            x - alpha))
            elif x == math.floor(x) and 0.0 <= x <= floor_a:
                continue  # integer powers below the order are annihilated
            else:
                raise PreconditionError(
                    f"Caputo image of D^{x} with order {alpha} leaves the family"
                )
        return WeightedPowerSum.of(*out)

    def integer_deriv(self, m: int) -> "WeightedPowerSum":
        out = []
        for c, x in self.terms:
            coeff = c * gamma(x + 1.0) * reciprocal_gamma(x - m + 1.0)
            if coeff != 0.0:
                out.append((coeff, x - m))
        return WeightedPowerSum(tuple(out))  # exponents may go below -1 pointwise

    def scaled(self, factor: float) -> "WeightedPowerSum":
        return WeightedPowerSum(tuple((c * factor, x) for c, x in self.terms))

    def plus(self, other: "WeightedPowerSum") -> "WeightedPowerSum":
        return WeightedPowerSum(self.terms + other.terms)

    def eval(self, psi: ScaleFunction, lam: float, t):
        d = np.asarray(psi.eval(np.asarray(t, dtype=float)), dtype=float) - psi.psi0
        acc = np.zeros_like(d)
        for c, x in self.terms:
            acc = acc + c * _pow_delta(d, x) if x != 0.0 else acc + c
        return np.exp(-lam * d) * acc

    def value_at_origin(self) -> float:
        """Limit at t -> 0+, exact; raises if any term diverges there."""
        total = 0.0
        for c, x in self.terms:
            if x < 0.0:
                raise DomainError("weighted power sum diverges at the origin")
            if x == 0.0:
                total += c
        return total

    @property
    def min_exponent(self) -> float:
        return min((x for _, x in self.terms), default=0.0)

    def handle(self, psi: ScaleFunction, lam: float, depth: int = 6) -> FunctionHandle:
        """FunctionHandle with analytic tempered derivatives to ``depth``."""
        derivs = []
        current = self
        for _ in range(depth):
            current = current.integer_deriv(1)
            derivs.append(
                lambda t, cur=current: cur.eval(psi, lam, t)
            )
        return FunctionHandle(
            value=lambda t: self.eval(psi, lam, t),
            tempered_derivs=derivs,
            bounded_at_origin=self.min_exponent >= 0.0,
            power=self,
            name="+".join(f"{c:g}*D^{x:g}" for c, x in self.terms) or "0",
        )
