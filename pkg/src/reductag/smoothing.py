"""Sparse-data estimators: ELE, Good-Turing, interpolation, successive abstraction.

Everything here works in plain probability space. The scalar functions
also accept numpy arrays, which is how tag-indexed distributions are
smoothed in one call.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from typing import Hashable, Mapping, Sequence

import numpy as np

SUM_TOL = 1e-9


class TagDistribution:
    """A probability distribution over a tagset, stored densely by tag id."""

    __slots__ = ("tagset", "probs")

    def __init__(self, tagset, probs, *, normalize: bool = False):
        p = np.array(probs, dtype=np.float64)
        if p.shape != (len(tagset),):
            raise ValueError(f"expected {len(tagset)} probabilities, got shape {p.shape}")
        if np.any(p < 0) or not np.all(np.isfinite(p)):
            raise ValueError("probabilities must be finite and non-negative")
        total = p.sum()
        if total <= 0:
            raise ValueError("distribution has empty support")
        if normalize:
            p /= total
        elif abs(total - 1.0) > SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, not 1")
        p.flags.writeable = False
        self.tagset = tagset
        self.probs = p

    @classmethod
    def from_counts(cls, tagset, counts: Mapping[int, float]) -> "TagDistribution":
        p = np.zeros(len(tagset))
        for t, c in counts.items():
            p[int(t)] += c
        return cls(tagset, p, normalize=True)

    def __getitem__(self, tag) -> float:
        """Probability of a Tag, tag id or tag name."""
        if isinstance(tag, str):
            tag = self.tagset.lookup(tag)
        return float(self.probs[int(getattr(tag, "id", tag))])

    def __len__(self) -> int:
        return len(self.probs)

    def __repr__(self) -> str:
        top = ", ".join(f"{t.name}:{p:.3f}" for t, p in self.top(3))
        return f"TagDistribution({top}{', ...' if len(self.support()) > 3 else ''})"

    def support(self) -> list:
        return [self.tagset[i] for i in np.flatnonzero(self.probs > 0)]

    def mode(self):
        """Most probable tag; ties go to the lowest tag id."""
        return self.tagset[int(np.argmax(self.probs))]

    def top(self, n: int) -> list:
        order = sorted(np.flatnonzero(self.probs > 0), key=lambda i: (-self.probs[i], i))
        return [(self.tagset[i], float(self.probs[i])) for i in order[:n]]

    def as_dict(self) -> dict:
        return {self.tagset[i]: float(self.probs[i]) for i in np.flatnonzero(self.probs > 0)}

    def total_variation(self, other: "TagDistribution") -> float:
        return 0.5 * float(np.abs(self.probs - other.probs).sum())


@dataclass(frozen=True)
class FrequencyTable:
    """Event counts over a domain of ``domain_size`` possible events."""

    counts: Mapping[Hashable, int]
    domain_size: int

    def __post_init__(self):
        if any(c < 0 for c in self.counts.values()):
            raise ValueError("counts must be non-negative")
        support = sum(1 for c in self.counts.values() if c > 0)
        if support > self.domain_size:
            raise ValueError("more observed events than domain_size")

    @property
    def total(self) -> int:
        return sum(self.counts.values())

    def frequencies_of_frequencies(self) -> Counter:
        return Counter(c for c in self.counts.values() if c > 0)


@dataclass(frozen=True)
class EleDistribution:
    """Result of ELE: probabilities for every event, seen or not."""

    table: FrequencyTable

    @property
    def denominator(self) -> float:
        return self.table.total + 0.5 * self.table.domain_size

    @property
    def unseen_prob(self) -> float:
        return 0.5 / self.denominator

    def __getitem__(self, event) -> float:
        return (self.table.counts.get(event, 0) + 0.5) / self.denominator

    def total_mass(self) -> float:
        seen = [e for e, c in self.table.counts.items()]
        unseen = self.table.domain_size - len(seen)
        return math.fsum(self[e] for e in seen) + unseen * self.unseen_prob


def ele(table: FrequencyTable) -> EleDistribution:
    """Expected-likelihood estimate: add 0.5 to every count in the domain."""
    if table.domain_size < 1:
        raise ValueError("domain_size must be at least 1")
    return EleDistribution(table)


def ele_array(counts) -> np.ndarray:
    """ELE over a dense count vector; the domain is the vector's length."""
    c = np.asarray(counts, dtype=np.float64)
    return (c + 0.5) / (c.sum() + 0.5 * c.shape[-1])


@dataclass(frozen=True)
class GoodTuringEstimate:
    adjusted: dict
    unseen_mass: float


def good_turing(table: FrequencyTable) -> GoodTuringEstimate:
    """Adjusted counts f* = (f+1) N_{f+1} / N_f.

    Where N_{f+1} is zero the count is left unadjusted.
    """
    nf = table.frequencies_of_frequencies()
    if not nf:
        raise ValueError("Good-Turing needs at least one observed event")
    adjusted = {}
    for event, f in table.counts.items():
        if f <= 0:
            continue
        if nf.get(f + 1, 0) > 0:
            adjusted[event] = (f + 1) * nf[f + 1] / nf[f]
        else:
            adjusted[event] = float(f)
    return GoodTuringEstimate(adjusted, nf.get(1, 0) / table.total)


@dataclass(frozen=True)
class InterpolationWeights:
    l1: float
    l2: float
    l3: float

    def __post_init__(self):
        if min(self.l1, self.l2, self.l3) < 0:
            raise ValueError("interpolation weights must be non-negative")
        if abs(self.l1 + self.l2 + self.l3 - 1.0) > SUM_TOL:
            raise ValueError("interpolation weights must sum to 1")


def interpolate_trigram(r_uni, r_bi, r_tri, w: InterpolationWeights):
    return w.l1 * r_uni + w.l2 * r_bi + w.l3 * r_tri


def linear_successive_abstraction(r, n, prior):
    """Blend a relative frequency from ``n`` observations with a prior.

    The relative frequency is weighted by sqrt(n) against a unit weight on
    the prior, so ``n == 0`` returns the prior unchanged.
    """
    if np.any(np.asarray(n) < 0):
        raise ValueError("observation count must be non-negative")
    s = np.sqrt(n)
    return (s * r + prior) / (s + 1)


def partial_successive_abstraction(r, n, priors: Sequence):
    """Like :func:`linear_successive_abstraction` with several priors averaged in.

    Each of the k priors gets unit weight: (sqrt(n)*r + sum(priors)) / (sqrt(n) + k).
    """
    if len(priors) == 0:
        raise ValueError("partial successive abstraction needs at least one prior")
    if np.any(np.asarray(n) < 0):
        raise ValueError("observation count must be non-negative")
    s = np.sqrt(n)
    acc = priors[0]
    for p in priors[1:]:
        acc = acc + p
    return (s * r + acc) / (s + len(priors))
