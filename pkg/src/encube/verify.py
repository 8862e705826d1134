"""Randomized law suites for the little cubes operad.

Each suite returns a report with the number of identities checked and, on
failure, a counterexample rendered with exact fractions plus the seed and
trial index needed to replay it.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .cubes import (CubesElement, Permutation, act_permutation, block_permutation, block_transpose,
                    full_compose, identity_element, interchange, rho_first, rho_last)
from .randgen import random_element, random_permutation


@dataclass
class SuiteReport:
    name: str
    trials: int
    seed: int
    checks: dict = field(default_factory=dict)
    counterexample: dict | None = None

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def count(self, law: str) -> None:
        self.checks[law] = self.checks.get(law, 0) + 1

    def to_json(self) -> dict:
        return {"suite": self.name, "ok": self.ok, "trials": self.trials, "seed": self.seed,
                "checks": dict(sorted(self.checks.items())), "counterexample": self.counterexample}


def direct_sum(perms: list[Permutation]) -> Permutation:
    images, offset = [], 0
    for p in perms:
        images.extend(offset + v for v in p.images)
        offset += len(p)
    return Permutation(tuple(images))


def _fail(report: SuiteReport, trial: int, law: str, **data) -> SuiteReport:
    report.counterexample = {"trial": trial, "law": law,
                             **{k: str(v) if isinstance(v, CubesElement) else v for k, v in data.items()}}
    return report


def verify_operad(trials: int = 1000, seed: int = 0, max_arity: int = 5, max_dim: int = 3) -> SuiteReport:
    """Associativity, both unit laws and both equivariance identities."""
    rng = random.Random(seed)
    report = SuiteReport("operad", trials, seed)
    for t in range(trials):
        n = rng.randint(1, max_dim)
        j = rng.randint(0, max_arity)
        c = random_element(rng, n, j)
        args = [random_element(rng, n, rng.randint(0, 3)) for _ in range(j)]
        inner = [[random_element(rng, n, rng.randint(0, 2)) for _ in range(a.arity)] for a in args]
        flat = [b for block in inner for b in block]
        lhs = full_compose(full_compose(c, args), flat)
        rhs = full_compose(c, [full_compose(a, bs) for a, bs in zip(args, inner)])
        report.count("associativity")
        if lhs != rhs:
            return _fail(report, t, "associativity", c=c, lhs=lhs, rhs=rhs)
        report.count("left unit")
        if full_compose(identity_element(n), [c]) != c:
            return _fail(report, t, "left unit", c=c)
        report.count("right unit")
        if full_compose(c, [identity_element(n)] * j) != c:
            return _fail(report, t, "right unit", c=c)
        sigma = random_permutation(rng, j)
        inv = sigma.inverse()
        moved = [args[inv(k) - 1] for k in range(1, j + 1)]
        lhs = full_compose(act_permutation(c, sigma), moved)
        rhs = act_permutation(full_compose(c, args), block_permutation(sigma, [a.arity for a in args]))
        report.count("equivariance (outer)")
        if lhs != rhs:
            return _fail(report, t, "equivariance (outer)", c=c, sigma=list(sigma.images), lhs=lhs, rhs=rhs)
        taus = [random_permutation(rng, a.arity) for a in args]
        lhs = full_compose(c, [act_permutation(a, tau) for a, tau in zip(args, taus)])
        rhs = act_permutation(full_compose(c, args), direct_sum(taus))
        report.count("equivariance (inner)")
        if lhs != rhs:
            return _fail(report, t, "equivariance (inner)", c=c, lhs=lhs, rhs=rhs)
    return report


def verify_interchange(trials: int = 500, seed: int = 0, max_arity: int = 4, max_dim: int = 3) -> SuiteReport:
    """Both composites of rho_first and rho_last against the interchange map."""
    rng = random.Random(seed)
    report = SuiteReport("interchange", trials, seed)
    for t in range(trials):
        n = rng.randint(2, max_dim)
        l = rng.randint(1, max_arity)
        m = rng.randint(1, max_arity)
        a = random_element(rng, 1, l)
        c = random_element(rng, n - 1, m)
        both = interchange(a, c)
        report.count("first then last")
        if full_compose(rho_first(a, n), [rho_last(c)] * l) != both:
            return _fail(report, t, "first then last", a=a, c=c)
        report.count("last then first")
        if full_compose(rho_last(c), [rho_first(a, n)] * m) != act_permutation(both, block_transpose(m, l)):
            return _fail(report, t, "last then first", a=a, c=c)
    return report
