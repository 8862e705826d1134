"""Finite differential graded algebra presentations.

A presentation lists basis elements with degrees (and optional weights),
structure constants for the multiplication, a differential, and optional
unit and augmentation.  Everything is exact.  ``top_degree`` and
``weight_cap`` mark a truncation: structure is only asserted, and only
used downstream, for products landing inside the caps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .chain import ChainComplex
from .linalg import Coefficients, SparseMatrix, vec_iadd

FLAG_NAMES = ("associative", "commutative", "augmented", "nonunital")


class PresentationError(ValueError):
    """Invalid presentation; ``witness`` holds the offending basis labels."""

    def __init__(self, message: str, witness: tuple = ()):
        super().__init__(message)
        self.witness = witness


@dataclass
class AlgebraPresentation:
    ring: Coefficients
    labels: list[str]
    degrees: list[int]
    mult: dict[tuple[int, int], dict[int, object]] = field(default_factory=dict)
    diff: dict[int, dict[int, object]] = field(default_factory=dict)
    unit: dict[int, object] | None = None
    augmentation: dict[int, object] | None = None
    flags: frozenset = frozenset()
    weights: list[int] | None = None
    top_degree: int | None = None
    weight_cap: int | None = None
    annotations: dict = field(default_factory=dict)

    # basic access -------------------------------------------------------
    @property
    def rank(self) -> int:
        return len(self.labels)

    def has(self, flag: str) -> bool:
        return flag in self.flags

    def weight(self, i: int) -> int:
        return 0 if self.weights is None else self.weights[i]

    def in_range(self, degree: int, weight: int = 0) -> bool:
        if self.top_degree is not None and degree > self.top_degree:
            return False
        if self.weight_cap is not None and weight > self.weight_cap:
            return False
        return True

    def mul(self, i: int, j: int) -> dict[int, object]:
        return self.mult.get((i, j), {})

    def mul_vec(self, u: Mapping[int, object], v: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for i, a in u.items():
            for j, b in v.items():
                vec_iadd(self.ring, out, self.mul(i, j), a * b)
        return out

    def d_vec(self, u: Mapping[int, object]) -> dict[int, object]:
        out: dict[int, object] = {}
        for i, a in u.items():
            vec_iadd(self.ring, out, self.diff.get(i, {}), a)
        return out

    def eps(self, i: int):
        if self.augmentation is None:
            raise PresentationError("presentation has no augmentation")
        return self.augmentation.get(i, 0)

    def unit_index(self) -> int | None:
        """Index of the unit when it is a single basis element."""
        if self.unit is None or len(self.unit) != 1:
            return None
        (i, c), = self.unit.items()
        return i if self.ring.reduce(c - 1) == 0 else None

    def complex(self) -> ChainComplex:
        """Underlying chain complex; keys are basis indices."""
        bases: dict[int, list[int]] = {}
        for i, d in enumerate(self.degrees):
            bases.setdefault(d, []).append(i)
        return ChainComplex.from_function(self.ring, bases, lambda i: self.diff.get(i, {}))

    def with_flags(self, *extra: str, drop: Iterable[str] = ()) -> "AlgebraPresentation":
        flags = (set(self.flags) | set(extra)) - set(drop)
        return _replace(self, flags=frozenset(flags))

    def with_ring(self, ring: Coefficients) -> "AlgebraPresentation":
        """Reinterpret integral structure constants in another ring."""
        def conv(v):
            return {k: ring(c) for k, c in v.items() if ring(c)}
        return _replace(
            self,
            ring=ring,
            mult={k: conv(v) for k, v in self.mult.items()},
            diff={k: conv(v) for k, v in self.diff.items()},
            unit=None if self.unit is None else conv(self.unit),
            augmentation=None if self.augmentation is None else conv(self.augmentation),
        )

    # validation ---------------------------------------------------------
    def validate(self) -> None:
        """Check every asserted structure; raise with a witness on failure."""
        ring, n = self.ring, self.rank
        if len(self.degrees) != n or (self.weights is not None and len(self.weights) != n):
            raise PresentationError("basis, degrees and weights differ in length")
        if len(set(self.labels)) != n:
            raise PresentationError("duplicate basis labels")
        if self.has("nonunital") and self.unit is not None:
            raise PresentationError("flagged nonunital but a unit is given")
        if self.has("augmented") and self.augmentation is None:
            raise PresentationError("flagged augmented but no augmentation is given")
        lab = self.labels
        for (i, j), v in self.mult.items():
            for k in v:
                if self.degrees[k] != self.degrees[i] + self.degrees[j]:
                    raise PresentationError(
                        f"product {lab[i]}*{lab[j]} has a term {lab[k]} of the wrong degree", (lab[i], lab[j]))
                if self.weight(k) != self.weight(i) + self.weight(j):
                    raise PresentationError(
                        f"product {lab[i]}*{lab[j]} has a term {lab[k]} of the wrong weight", (lab[i], lab[j]))
        for i, v in self.diff.items():
            for k in v:
                if self.degrees[k] != self.degrees[i] - 1 or self.weight(k) != self.weight(i):
                    raise PresentationError(f"d({lab[i]}) has a term {lab[k]} of the wrong degree", (lab[i],))
        for i in range(n):
            if self.d_vec(self.d_vec({i: 1})):
                raise PresentationError(f"d^2 != 0 on {lab[i]}", (lab[i],))
        for i, j in self._pairs():
            lhs = self.d_vec(self.mul(i, j))
            rhs = self.mul_vec(self.diff.get(i, {}), {j: 1})
            vec_iadd(ring, rhs, self.mul_vec({i: 1}, self.diff.get(j, {})), ring.sign(self.degrees[i]))
            if _differ(ring, lhs, rhs):
                raise PresentationError(f"Leibniz rule fails on ({lab[i]}, {lab[j]})", (lab[i], lab[j]))
            if self.has("commutative"):
                s = ring.sign(self.degrees[i] * self.degrees[j])
                rev = {k: s * c for k, c in self.mul(j, i).items()}
                if _differ(ring, self.mul(i, j), rev):
                    raise PresentationError(
                        f"graded commutativity fails on ({lab[i]}, {lab[j]})", (lab[i], lab[j]))
        if self.has("associative"):
            for i, j, k in self._triples():
                lhs = self.mul_vec(self.mul(i, j), {k: 1})
                rhs = self.mul_vec({i: 1}, self.mul(j, k))
                if _differ(ring, lhs, rhs):
                    raise PresentationError(
                        f"associativity fails on ({lab[i]}, {lab[j]}, {lab[k]})", (lab[i], lab[j], lab[k]))
        if self.unit is not None:
            for i in range(n):
                if _differ(ring, self.mul_vec(self.unit, {i: 1}), {i: 1}) or _differ(
                        ring, self.mul_vec({i: 1}, self.unit), {i: 1}):
                    raise PresentationError(f"unit law fails on {lab[i]}", (lab[i],))
            if self.d_vec(self.unit):
                raise PresentationError("the unit is not a cycle")
        if self.augmentation is not None:
            eps = self.augmentation
            for i, c in eps.items():
                if c and self.degrees[i] != 0:
                    raise PresentationError(f"augmentation is nonzero on {lab[i]} outside degree 0", (lab[i],))
            for i in range(n):
                if _dot(ring, eps, self.diff.get(i, {})):
                    raise PresentationError(f"augmentation is not a chain map at {lab[i]}", (lab[i],))
            for i, j in self._pairs():
                if ring.reduce(_dot(ring, eps, self.mul(i, j)) - eps.get(i, 0) * eps.get(j, 0)):
                    raise PresentationError(
                        f"augmentation is not multiplicative on ({lab[i]}, {lab[j]})", (lab[i], lab[j]))
            if self.unit is not None and ring.reduce(_dot(ring, eps, self.unit) - 1):
                raise PresentationError("augmentation does not send the unit to 1")

    def _buckets(self) -> list[tuple[int, int, list[int]]]:
        groups: dict[tuple[int, int], list[int]] = {}
        for i in range(self.rank):
            groups.setdefault((self.degrees[i], self.weight(i)), []).append(i)
        return [(d, w, idx) for (d, w), idx in sorted(groups.items())]

    def _pairs(self):
        """Index pairs whose product lies inside the truncation."""
        b = self._buckets()
        for d1, w1, g1 in b:
            for d2, w2, g2 in b:
                if self.in_range(d1 + d2, w1 + w2):
                    yield from ((i, j) for i in g1 for j in g2)

    def _triples(self):
        b = self._buckets()
        for d1, w1, g1 in b:
            for d2, w2, g2 in b:
                for d3, w3, g3 in b:
                    if self.in_range(d1 + d2 + d3, w1 + w2 + w3):
                        yield from ((i, j, k) for i in g1 for j in g2 for k in g3)

    # serialization ------------------------------------------------------
    def to_json(self) -> dict:
        ring = self.ring

        def sv(v):
            return [[k, ring.format(c)] for k, c in sorted(v.items())]

        doc = {
            "coefficients": str(ring),
            "basis": [
                {"label": l, "degree": d, **({"weight": self.weights[i]} if self.weights else {})}
                for i, (l, d) in enumerate(zip(self.labels, self.degrees))
            ],
            "unit": None if self.unit is None else sv(self.unit),
            "augmentation": None if self.augmentation is None else sv(self.augmentation),
            "multiplication": [[i, j, sv(v)] for (i, j), v in sorted(self.mult.items()) if v],
            "differential": [[i, sv(v)] for i, v in sorted(self.diff.items()) if v],
            "flags": sorted(self.flags),
        }
        if self.top_degree is not None:
            doc["top_degree"] = self.top_degree
        if self.weight_cap is not None:
            doc["weight_cap"] = self.weight_cap
        return doc

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    @classmethod
    def from_json(cls, doc: Mapping, ring: Coefficients | None = None, validate: bool = True) -> "AlgebraPresentation":
        try:
            ring = ring or Coefficients.parse(str(doc["coefficients"]))
            basis = doc["basis"]
            labels = [str(b["label"]) for b in basis]
            degrees = [int(b["degree"]) for b in basis]
            weights = [int(b["weight"]) for b in basis] if basis and all("weight" in b for b in basis) else None
            n = len(labels)

            def vec(entries, where):
                out: dict[int, object] = {}
                for k, c in entries:
                    k = int(k)
                    if not 0 <= k < n:
                        raise PresentationError(f"{where}: basis index {k} out of range")
                    vec_iadd(ring, out, {k: ring(c)})
                return out

            mult = {}
            for entry in doc.get("multiplication", []):
                i, j, terms = entry
                i, j = int(i), int(j)
                if not (0 <= i < n and 0 <= j < n):
                    raise PresentationError(f"multiplication entry {[i, j]} out of range")
                v = vec(terms, f"multiplication[{i},{j}]")
                if v:
                    mult[(i, j)] = v
            diff = {}
            for entry in doc.get("differential", []):
                i, terms = entry
                v = vec(terms, f"differential[{i}]")
                if v:
                    diff[int(i)] = v
            unit = doc.get("unit")
            aug = doc.get("augmentation")
            flags = frozenset(doc.get("flags", []))
            unknown = flags - set(FLAG_NAMES)
            if unknown:
                raise PresentationError(f"unknown flags {sorted(unknown)}")
            pres = cls(
                ring=ring, labels=labels, degrees=degrees, mult=mult, diff=diff,
                unit=None if unit is None else vec(unit, "unit"),
                augmentation=None if aug is None else vec(aug, "augmentation"),
                flags=flags, weights=weights,
                top_degree=doc.get("top_degree"), weight_cap=doc.get("weight_cap"),
            )
        except PresentationError:
            raise
        except (KeyError, TypeError, ValueError) as exc:
            raise PresentationError(f"malformed presentation: {exc!r}") from exc
        if validate:
            pres.validate()
        return pres

    @classmethod
    def load(cls, path: str | Path, ring: Coefficients | None = None, validate: bool = True) -> "AlgebraPresentation":
        text = Path(path).read_text()
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise PresentationError(f"{path}: invalid JSON at line {exc.lineno}: {exc.msg}") from exc
        return cls.from_json(doc, ring=ring, validate=validate)


def _replace(p: AlgebraPresentation, **kw) -> AlgebraPresentation:
    data = dict(p.__dict__)
    data.update(kw)
    return AlgebraPresentation(**data)


def _differ(ring, u: Mapping, v: Mapping) -> bool:
    keys = set(u) | set(v)
    return any(ring.reduce(u.get(k, 0) - v.get(k, 0)) for k in keys)


def _dot(ring, eps: Mapping, v: Mapping):
    return ring.reduce(sum(eps.get(k, 0) * c for k, c in v.items()))


# ---------------------------------------------------------------------------
# standard families

def truncated_polynomial(ring: Coefficients, n: int, degree: int = 0, reduced: bool = False,
                         name: str = "x") -> AlgebraPresentation:
    """k[x]/x^n; with ``reduced`` the augmentation ideal (x, ..., x^{n-1})."""
    if n < 2:
        raise PresentationError("need n >= 2")
    start = 1 if reduced else 0
    powers = list(range(start, n))
    labels = ["1" if e == 0 else (name if e == 1 else f"{name}^{e}") for e in powers]
    pos = {e: i for i, e in enumerate(powers)}
    mult = {}
    for a in powers:
        for b in powers:
            if a + b < n:
                mult[(pos[a], pos[b])] = {pos[a + b]: ring(1)}
    flags = {"associative", "commutative"}
    if degree % 2 and n > 2 and ring.characteristic != 2:
        flags.discard("commutative")
    if reduced:
        return AlgebraPresentation(ring, labels, [degree * e for e in powers], mult,
                                   flags=frozenset(flags | {"nonunital"}), weights=list(powers))
    return AlgebraPresentation(
        ring, labels, [degree * e for e in powers], mult, unit={0: ring(1)},
        augmentation={0: ring(1)}, flags=frozenset(flags | {"augmented"}), weights=list(powers))


def exterior(ring: Coefficients, degree: int = 1) -> AlgebraPresentation:
    """Lambda(x) = k[x]/x^2 with |x| = ``degree``."""
    return truncated_polynomial(ring, 2, degree)


def reduced_tensor_algebra(ring: Coefficients, weight_cap: int, degree: int = 0) -> AlgebraPresentation:
    """Reduced tensor algebra on one generator, truncated at ``weight_cap``.

    With one generator the words are the powers x^w, so this is the
    non-unital polynomial algebra graded by weight; weights above the cap
    are discarded, and only weight-capped data are asserted.
    """
    labels = ["x" if w == 1 else f"x^{w}" for w in range(1, weight_cap + 1)]
    mult = {}
    for a in range(1, weight_cap + 1):
        for b in range(1, weight_cap + 1 - a):
            mult[(a - 1, b - 1)] = {a + b - 1: ring(1)}
    flags = {"associative", "nonunital"}
    if degree % 2 == 0 or ring.characteristic == 2:
        flags.add("commutative")
    return AlgebraPresentation(ring, labels, [degree * w for w in range(1, weight_cap + 1)], mult,
                               flags=frozenset(flags), weights=list(range(1, weight_cap + 1)),
                               weight_cap=weight_cap)


def zero_mult(module: ChainComplex, name: str = "x") -> AlgebraPresentation:
    """Non-unital algebra with zero multiplication on a chain complex."""
    labels, degrees, index = [], [], {}
    for d in module.degrees:
        for key in module.bases[d]:
            index[(d, key)] = len(labels)
            labels.append(str(key) if not isinstance(key, int) else f"{name}{key}")
            degrees.append(d)
    diff = {}
    for d in module.degrees:
        for j, key in enumerate(module.bases[d]):
            if d in module.diffs:
                col = module.d(d).cols[j]
                if col:
                    diff[index[(d, key)]] = {index[(d - 1, module.bases[d - 1][i])]: c for i, c in col.items()}
    return AlgebraPresentation(module.ring, labels, degrees, {}, diff,
                               flags=frozenset({"associative", "commutative", "nonunital"}))


def unitalize(n: AlgebraPresentation) -> AlgebraPresentation:
    """KN = R + N with a formal unit at index 0 and the obvious augmentation."""
    if n.unit is not None or not n.has("nonunital"):
        raise PresentationError("unitalization needs a non-unital presentation")
    mult = {(0, 0): {0: n.ring(1)}}
    for i in range(n.rank):
        mult[(0, i + 1)] = {i + 1: n.ring(1)}
        mult[(i + 1, 0)] = {i + 1: n.ring(1)}
    for (i, j), v in n.mult.items():
        mult[(i + 1, j + 1)] = {k + 1: c for k, c in v.items()}
    diff = {i + 1: {k + 1: c for k, c in v.items()} for i, v in n.diff.items()}
    flags = (set(n.flags) - {"nonunital"}) | {"augmented"}
    return AlgebraPresentation(
        n.ring, ["1"] + list(n.labels), [0] + list(n.degrees), mult, diff,
        unit={0: n.ring(1)}, augmentation={0: n.ring(1)}, flags=frozenset(flags),
        weights=None if n.weights is None else [0] + list(n.weights),
        top_degree=n.top_degree, weight_cap=n.weight_cap, annotations=dict(n.annotations))


def augmentation_ideal(a: AlgebraPresentation) -> AlgebraPresentation:
    """The kernel of the augmentation, when the unit is the only basis
    element with nonzero augmentation (true for every shipped fixture)."""
    u = a.unit_index()
    if u is None or a.augmentation is None:
        raise PresentationError("need a basis unit and an augmentation")
    if any(c for i, c in a.augmentation.items() if i != u):
        raise PresentationError("augmentation is not supported on the unit alone")
    keep = [i for i in range(a.rank) if i != u]
    pos = {i: k for k, i in enumerate(keep)}

    def sub(v):
        return {pos[k]: c for k, c in v.items() if k != u}

    mult = {}
    for i in keep:
        for j in keep:
            v = sub(a.mul(i, j))
            if v:
                mult[(pos[i], pos[j])] = v
    diff = {pos[i]: sub(v) for i, v in a.diff.items() if i in pos and sub(v)}
    flags = (set(a.flags) - {"augmented"}) | {"nonunital"}
    return AlgebraPresentation(
        a.ring, [a.labels[i] for i in keep], [a.degrees[i] for i in keep], mult, diff,
        flags=frozenset(flags), weights=None if a.weights is None else [a.weights[i] for i in keep],
        top_degree=a.top_degree, weight_cap=a.weight_cap, annotations=dict(a.annotations))


def decomposables_quotient(n: AlgebraPresentation):
    """Projection N -> QN = N / span of all binary products.

    Returns ``(qn_complex, proj_matrix_by_degree, kept_indices)`` where
    ``kept_indices`` are the basis indices of N that index QN.
    """
    from .linalg import quotient_maps

    ring = n.ring
    comp = n.complex()
    proj, kept_all = {}, []
    for d in comp.degrees:
        keys = comp.bases[d]
        local = {k: i for i, k in enumerate(keys)}
        spanning = []
        for (i, j), v in n.mult.items():
            if n.degrees[i] + n.degrees[j] == d and v:
                spanning.append({local[k]: c for k, c in v.items()})
        P, _, kept = quotient_maps(ring, len(keys), spanning)
        proj[d] = P
        kept_all.extend(keys[i] for i in kept)
    bases: dict[int, list] = {}
    for i in kept_all:
        bases.setdefault(n.degrees[i], []).append(i)
    diffs = {}
    for d, keys in bases.items():
        if d - 1 not in bases:
            continue
        cols = []
        src = comp.bases[d]
        for i in keys:
            col = comp.d(d).cols[src.index(i)] if d in comp.diffs else {}
            cols.append(proj[d - 1].apply(col) if col else {})
        diffs[d] = SparseMatrix(ring, len(bases[d - 1]), len(keys), cols)
    qn = ChainComplex(ring, bases, diffs)
    return qn, proj, kept_all

