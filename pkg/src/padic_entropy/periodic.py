"""Finite local products of p-components and the per-prime entropy sum.

A periodic group with finite active prime support decomposes as a product of
its topological p-components; every p-component is fully invariant, so an
endomorphism is exactly a per-prime family of block endomorphisms and its
entropy is the sum of the per-prime entropies.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import ParseError, ValidationError
from .groups import BlockEndomorphism, EntropyClass, FiniteRankPGroup
from .padic import EntropyValue, ensure_prime


@dataclass(frozen=True)
class PeriodicGroup:
    """A finite map prime -> p-component, with an implicitly trivial tail."""

    components: Mapping[int, FiniteRankPGroup]

    def __post_init__(self):
        clean = {}
        for p, component in dict(self.components).items():
            ensure_prime(p)
            if component.p != p:
                raise ValidationError(
                    f"component at prime {p} is built over p={component.p}"
                )
            clean[p] = component
        object.__setattr__(self, "components", dict(sorted(clean.items())))

    def classify(self) -> EntropyClass:
        """E0 iff every p-component is E0; finite support keeps entropy finite."""
        if all(g.classify() is EntropyClass.E0 for g in self.components.values()):
            return EntropyClass.E0
        return EntropyClass.E_FINITE_NOT_E0

    def to_json(self) -> dict:
        return {"components": {str(p): g.to_json() for p, g in self.components.items()}}

    @classmethod
    def from_json(cls, data: Mapping) -> "PeriodicGroup":
        if not isinstance(data, Mapping):
            raise ParseError("periodic group must be an object")
        components = {}
        for key, doc in data.items():
            try:
                p = int(key)
            except (TypeError, ValueError):
                raise ParseError(f"unknown prime key {key!r}") from None
            components[ensure_prime(p)] = FiniteRankPGroup.from_json(doc)
        return cls(components)


@dataclass(frozen=True)
class PeriodicEndomorphism:
    """A per-prime family of block endomorphisms (cross-prime blocks vanish)."""

    group: PeriodicGroup
    endomorphisms: Mapping[int, BlockEndomorphism]

    def __post_init__(self):
        endos = dict(self.endomorphisms)
        if set(endos) - set(self.group.components):
            extra = sorted(set(endos) - set(self.group.components))
            raise ValidationError(f"endomorphisms given for absent primes {extra}")
        for p, endo in endos.items():
            if endo.group != self.group.components[p]:
                raise ValidationError(f"endomorphism at p={p} is on a different group")
        object.__setattr__(self, "endomorphisms", dict(sorted(endos.items())))

    def ensure_valid(self):
        for endo in self.endomorphisms.values():
            endo.ensure_valid()

    def entropy(self) -> EntropyValue:
        """Sum over primes of the component entropies."""
        self.ensure_valid()
        total = EntropyValue.zero()
        for endo in self.endomorphisms.values():
            total = total + endo.entropy()
        return total

    def per_prime_entropy(self) -> dict[int, EntropyValue]:
        self.ensure_valid()
        return {p: endo.entropy() for p, endo in self.endomorphisms.items()}

    @classmethod
    def from_json(cls, group: PeriodicGroup, data: Mapping) -> "PeriodicEndomorphism":
        if not isinstance(data, Mapping):
            raise ParseError("periodic endomorphism must map primes to block objects")
        endos = {}
        for key, blocks in data.items():
            try:
                p = int(key)
            except (TypeError, ValueError):
                raise ParseError(f"unknown prime key {key!r}") from None
            if p not in group.components:
                raise ParseError(f"endomorphism given for prime {p} absent from the group")
            endos[p] = BlockEndomorphism.from_json(group.components[p], blocks)
        return cls(group, endos)


def classify_periodic(group: PeriodicGroup) -> EntropyClass:
    return group.classify()
