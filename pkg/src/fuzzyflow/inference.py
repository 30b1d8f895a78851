"""Mamdani inference: rule activation, envelope aggregation, centroid defuzzification.

The pipeline is the classical min/min/max Mamdani scheme: AND across a
rule's antecedent uses min, each fired consequent is clipped at the rule
strength, clipped sets are merged pointwise with max, and the crisp score
is the centroid of the merged envelope computed by discrete summation on
a fixed uniform grid.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import ConfigurationError, UsageError
from .membership import LinguisticTerm, LinguisticVariable, TrapezoidMF

#: Alert terms in ascending severity: no attack, low, medium, high.
ALERT_TERMS = ("FA", "LA", "MA", "HA")

# Partition of [0, 1] used for the alert variable: adjacent terms cross at
# exactly 0.5, and the set is symmetric about 0.5 (FA/HA and LA/MA are
# mirror pairs), so a lone FA activation and a lone HA activation produce
# mirrored scores.
_ALERT_CORNERS = {
    "FA": (0.0, 0.0, 0.15, 0.30),
    "LA": (0.15, 0.30, 0.40, 0.60),
    "MA": (0.40, 0.60, 0.70, 0.85),
    "HA": (0.70, 0.85, 1.0, 1.0),
}


def attack_possibility_variable() -> LinguisticVariable:
    """The standard output variable scoring attack possibility on [0, 1]."""
    terms = tuple(LinguisticTerm(n, TrapezoidMF(*_ALERT_CORNERS[n])) for n in ALERT_TERMS)
    return LinguisticVariable("attack_possibility", (0.0, 1.0), terms)


@dataclass(frozen=True)
class FuzzyRule:
    """IF every (variable, term) pair in ``antecedent`` THEN ``consequent``.

    ``index`` is presentation metadata (1-based in the standard table);
    disabled rules stay in the base but never fire.
    """

    antecedent: Mapping[str, str]
    consequent: str
    index: int = 0
    enabled: bool = True

    def __post_init__(self):
        object.__setattr__(self, "antecedent", dict(self.antecedent))
        if not self.antecedent:
            raise UsageError(f"rule {self.index}: empty antecedent")


@dataclass(frozen=True)
class InferenceConfig:
    """Grid resolution for defuzzification and the crisp alarm threshold.

    The threshold is inclusive on both ends so a sweep can pin every
    record (0.0) or no record (1.0).
    """

    defuzz_grid_points: int = 1001
    threshold: float = 0.5

    def __post_init__(self):
        if self.defuzz_grid_points < 3:
            raise UsageError(f"defuzz_grid_points must be >= 3, got {self.defuzz_grid_points}")
        if not 0.0 <= self.threshold <= 1.0:
            raise UsageError(f"threshold must lie in [0, 1], got {self.threshold}")


@dataclass(frozen=True)
class RuleBase:
    """Input variables, the output variable, and one rule per antecedent combination."""

    input_variables: tuple[LinguisticVariable, ...]
    output_variable: LinguisticVariable
    rules: tuple[FuzzyRule, ...]

    def __post_init__(self):
        object.__setattr__(self, "input_variables", tuple(self.input_variables))
        object.__setattr__(self, "rules", tuple(self.rules))
        names = [v.name for v in self.input_variables]
        if len(set(names)) != len(names):
            raise ConfigurationError(f"duplicate input variable names: {names}")
        by_name = {v.name: v for v in self.input_variables}
        seen: dict[tuple[str, ...], int] = {}
        for rule in self.rules:
            if set(rule.antecedent) != set(names):
                raise ConfigurationError(
                    f"rule {rule.index}: antecedent names {sorted(rule.antecedent)} "
                    f"do not match the input variables {sorted(names)}"
                )
            for var, term in rule.antecedent.items():
                if term not in by_name[var].term_names:
                    raise ConfigurationError(
                        f"rule {rule.index}: unknown term {term!r} for variable {var!r}"
                    )
            if rule.consequent not in self.output_variable.term_names:
                raise ConfigurationError(
                    f"rule {rule.index}: unknown output term {rule.consequent!r}"
                )
            key = tuple(rule.antecedent[n] for n in names)
            if key in seen:
                raise ConfigurationError(
                    f"rules {seen[key]} and {rule.index} share the antecedent {key}"
                )
            seen[key] = rule.index
        expected = 1
        for v in self.input_variables:
            expected *= len(v.terms)
        if len(self.rules) != expected:
            raise ConfigurationError(
                f"rule base must cover every antecedent combination exactly once: "
                f"expected {expected} rules, got {len(self.rules)}"
            )

    def rule(self, index: int) -> FuzzyRule:
        for r in self.rules:
            if r.index == index:
                return r
        raise UsageError(f"no rule with index {index}")

    def with_disabled(self, indices: Iterable[int]) -> "RuleBase":
        """Copy of this base with the given rule indices switched off."""
        wanted = set(indices)
        unknown = wanted - {r.index for r in self.rules}
        if unknown:
            raise UsageError(f"unknown rule indices: {sorted(unknown)}")
        rules = tuple(
            replace(r, enabled=False) if r.index in wanted else r for r in self.rules
        )
        return replace(self, rules=rules)


@dataclass(frozen=True, eq=False)
class Envelope:
    """Aggregated output membership mu sampled at grid points y."""

    y: np.ndarray
    mu: np.ndarray

    def __post_init__(self):
        if self.y.shape != self.mu.shape:
            raise UsageError("envelope grid and membership arrays must match in shape")

    def pairs(self) -> list[tuple[float, float]]:
        return list(zip(self.y.tolist(), self.mu.tolist()))


@dataclass(frozen=True)
class AlertScore:
    """Crisp attack-possibility score with its derived classification.

    ``no_activation`` marks the degenerate case where no rule fired at
    all; the score is then 0 by convention rather than a true centroid.
    """

    score: float
    alert_class: str
    is_intrusion: bool
    no_activation: bool = False


def rule_strength(rule: FuzzyRule, fuzzified: Mapping[str, Mapping[str, float]]) -> float:
    """Firing strength of one rule: min over its antecedent term degrees."""
    strength = 1.0
    for var, term in rule.antecedent.items():
        try:
            degree = fuzzified[var][term]
        except KeyError as exc:
            raise ConfigurationError(
                f"rule {rule.index}: no fuzzified degree for {var!r}/{term!r}"
            ) from exc
        strength = min(strength, degree)
    return strength


def aggregate(rule_base: RuleBase, strengths: Sequence[float], grid_points: int) -> Envelope:
    """Clip each fired consequent at its strength and merge with pointwise max.

    Rules sharing a consequent term are folded through their strongest
    activation first; because min is monotone in the strength this yields
    exactly the same envelope as clipping every rule separately.
    """
    if len(strengths) != len(rule_base.rules):
        raise UsageError(
            f"expected {len(rule_base.rules)} strengths, got {len(strengths)}"
        )
    if grid_points < 3:
        raise UsageError(f"grid must have at least 3 points, got {grid_points}")
    lo, hi = rule_base.output_variable.universe
    y = np.linspace(lo, hi, grid_points)
    mu = np.zeros(grid_points)
    peak: dict[str, float] = {}
    for rule, s in zip(rule_base.rules, strengths):
        if not rule.enabled:
            continue
        s = float(s)
        if s > peak.get(rule.consequent, 0.0):
            peak[rule.consequent] = s
    for term in rule_base.output_variable.terms:
        s = peak.get(term.name, 0.0)
        if s > 0.0:
            np.maximum(mu, np.minimum(s, term.mf.membership(y)), out=mu)
    return Envelope(y=y, mu=mu)


def defuzzify_centroid(envelope: Envelope) -> tuple[float, bool]:
    """Crisp score and whether anything fired.

    The centroid is the membership-weighted mean of the grid points. A
    flat zero envelope has no centroid and yields (0.0, False).
    """
    if envelope.y.size == 0:
        raise UsageError("cannot defuzzify an empty envelope")
    total = float(envelope.mu.sum())
    if total == 0.0:
        return 0.0, False
    return float((envelope.y * envelope.mu).sum() / total), True


def classify_score(output: LinguisticVariable, score: float) -> str:
    """Output term with the highest membership at score; ties keep the earlier term."""
    best_name = output.terms[0].name
    best = -1.0
    for term in output.terms:
        degree = term.mf.membership(score)
        if degree > best:
            best = degree
            best_name = term.name
    return best_name


def infer(
    rule_base: RuleBase, config: InferenceConfig, inputs: Mapping[str, float]
) -> AlertScore:
    """Run the full pipeline for one observation.

    ``inputs`` maps every input variable name to its crisp value; values
    outside a variable's universe are clamped to the nearest bound. The
    result is a pure function of the arguments.
    """
    fuzzified = {}
    for var in rule_base.input_variables:
        if var.name not in inputs:
            raise ConfigurationError(f"missing input value for variable {var.name!r}")
        fuzzified[var.name] = var.fuzzify(inputs[var.name])
    strengths = [
        rule_strength(r, fuzzified) if r.enabled else 0.0 for r in rule_base.rules
    ]
    envelope = aggregate(rule_base, strengths, config.defuzz_grid_points)
    score, fired = defuzzify_centroid(envelope)
    return AlertScore(
        score=score,
        alert_class=classify_score(rule_base.output_variable, score),
        is_intrusion=score >= config.threshold,
        no_activation=not fired,
    )
