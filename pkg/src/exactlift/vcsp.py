"""Finite-valued CSP instances and the exhaustive ground-truth optimizer."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, Mapping, Tuple

from .errors import CapExceeded, ContractViolation

DEFAULT_BRUTE_CAP = 1 << 20  # assignment-space states


@dataclass(frozen=True)
class Domain:
    labels: Tuple[str, ...]

    def __post_init__(self):
        if not self.labels:
            raise ContractViolation("domain must be nonempty")
        if len(set(self.labels)) != len(self.labels):
            raise ContractViolation("domain labels must be distinct")

    @property
    def size(self) -> int:
        return len(self.labels)


@dataclass(frozen=True)
class ValuedFunction:
    """Total payoff table f: D^arity -> nonnegative integers."""

    name: str
    arity: int
    table: Mapping[Tuple[str, ...], int]

    def validate(self, domain: Domain) -> None:
        if self.arity < 1:
            raise ContractViolation(f"function {self.name}: arity must be >= 1")
        expected = set(itertools.product(domain.labels, repeat=self.arity))
        if set(self.table.keys()) != expected:
            raise ContractViolation(f"function {self.name}: table is not total on D^{self.arity}")
        for t, v in self.table.items():
            if not isinstance(v, int) or v < 0:
                raise ContractViolation(f"function {self.name}: value at {t} must be a nonnegative integer")

    def __call__(self, args: Tuple[str, ...]) -> int:
        return self.table[args]


@dataclass(frozen=True)
class Constraint:
    scope: Tuple[str, ...]
    fn: ValuedFunction
    weight: int


@dataclass(frozen=True)
class VcspInstance:
    domain: Domain
    variables: Tuple[str, ...]
    constraints: Tuple[Constraint, ...]

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ContractViolation("variable names must be distinct")
        vset = set(self.variables)
        for k, con in enumerate(self.constraints):
            con.fn.validate(self.domain)
            if len(con.scope) != con.fn.arity:
                raise ContractViolation(f"constraint {k}: scope length != arity of {con.fn.name}")
            if any(v not in vset for v in con.scope):
                raise ContractViolation(f"constraint {k}: scope variable outside the instance")
            if not isinstance(con.weight, int) or con.weight < 0:
                raise ContractViolation(f"constraint {k}: weight must be a nonnegative integer")


Assignment = Dict[str, str]


def evaluate(instance: VcspInstance, assignment: Mapping[str, str]) -> int:
    """Total weighted payoff of a total assignment."""
    for v in instance.variables:
        if v not in assignment:
            raise ContractViolation(f"assignment misses variable {v}")
    total = 0
    for con in instance.constraints:
        args = tuple(assignment[v] for v in con.scope)
        total += con.weight * con.fn(args)
    return total


def brute_force_opt(instance: VcspInstance, cap: int = DEFAULT_BRUTE_CAP):
    """Exact optimum and its lexicographically first maximizer.

    The assignment space D^V is enumerated outright, so this is the ground
    truth oracle; it refuses instances beyond `cap` states.
    """
    n = len(instance.variables)
    states = instance.domain.size ** n
    if states > cap:
        raise CapExceeded(
            f"instance too large for oracle: |D|^|V| = {states} > cap {cap}"
        )
    best_value = None
    best_assignment = None
    # product(..., repeat=0) yields the single empty assignment, so n == 0 works
    for combo in itertools.product(instance.domain.labels, repeat=n):
        h = dict(zip(instance.variables, combo))
        val = evaluate(instance, h)
        if best_value is None or val > best_value:
            best_value, best_assignment = val, h
    return best_value, best_assignment
