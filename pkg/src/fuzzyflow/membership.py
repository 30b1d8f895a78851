"""Trapezoidal membership functions and linguistic variables."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UsageError


@dataclass(frozen=True)
class TrapezoidMF:
    """Piecewise-linear membership function with corners a <= b <= c <= d.

    Membership is 0 outside [a, d], 1 on the plateau [b, c], and linear on
    the two ramps. A zero-width ramp (a == b or c == d) acts as a step, so
    the plateau value is kept at the shared corner.
    """

    a: float
    b: float
    c: float
    d: float

    def __post_init__(self):
        if not (self.a <= self.b <= self.c <= self.d):
            raise UsageError(
                f"trapezoid corners must be non-decreasing, got "
                f"({self.a}, {self.b}, {self.c}, {self.d})"
            )

    @property
    def corners(self) -> tuple[float, float, float, float]:
        return (self.a, self.b, self.c, self.d)

    @property
    def support(self) -> tuple[float, float]:
        return (self.a, self.d)

    def membership(self, x):
        """Degree of membership at x. Accepts a scalar or an ndarray."""
        if np.ndim(x) == 0:
            v = float(x)
            if v < self.a or v > self.d:
                return 0.0
            if self.b <= v <= self.c:
                return 1.0
            if v < self.b:
                return (v - self.a) / (self.b - self.a)
            return (self.d - v) / (self.d - self.c)
        arr = np.asarray(x, dtype=float)
        out = np.zeros(arr.shape)
        out[(arr >= self.b) & (arr <= self.c)] = 1.0
        if self.a < self.b:
            m = (arr > self.a) & (arr < self.b)
            out[m] = (arr[m] - self.a) / (self.b - self.a)
        if self.c < self.d:
            m = (arr > self.c) & (arr < self.d)
            out[m] = (self.d - arr[m]) / (self.d - self.c)
        return out

    def __call__(self, x):
        return self.membership(x)


@dataclass(frozen=True)
class LinguisticTerm:
    """A named fuzzy set inside a linguistic variable."""

    name: str
    mf: TrapezoidMF

    def __post_init__(self):
        if not self.name:
            raise UsageError("term name must be non-empty")


@dataclass(frozen=True)
class LinguisticVariable:
    """A named dimension with a closed universe and ordered linguistic terms.

    Terms are kept in the order supplied, which must be ascending by the
    left support corner; that order also breaks classification ties.
    """

    name: str
    universe: tuple[float, float]
    terms: tuple[LinguisticTerm, ...]

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(float(u) for u in self.universe))
        object.__setattr__(self, "terms", tuple(self.terms))
        lo, hi = self.universe
        if not lo < hi:
            raise UsageError(f"{self.name}: universe needs lo < hi, got [{lo}, {hi}]")
        if not self.terms:
            raise UsageError(f"{self.name}: at least one term is required")
        names = [t.name for t in self.terms]
        if len(set(names)) != len(names):
            raise UsageError(f"{self.name}: duplicate term names in {names}")
        prev_a = None
        for t in self.terms:
            if t.mf.a < lo or t.mf.d > hi:
                raise UsageError(
                    f"{self.name}: term {t.name!r} support {t.mf.support} leaves "
                    f"the universe [{lo}, {hi}]"
                )
            if prev_a is not None and t.mf.a < prev_a:
                raise UsageError(f"{self.name}: terms must be ordered by ascending support")
            prev_a = t.mf.a

    @property
    def term_names(self) -> tuple[str, ...]:
        return tuple(t.name for t in self.terms)

    def term(self, name: str) -> LinguisticTerm:
        for t in self.terms:
            if t.name == name:
                return t
        raise ConfigurationError(f"{self.name}: no term named {name!r}")

    def clamp(self, x: float) -> float:
        """Pull x to the nearest universe bound when it falls outside."""
        lo, hi = self.universe
        return min(max(float(x), lo), hi)

    def fuzzify(self, x: float) -> dict[str, float]:
        """Membership degree of every term at x, clamped into the universe."""
        xc = self.clamp(x)
        return {t.name: t.mf.membership(xc) for t in self.terms}
