"""Power systems, partial associative algebras, the free-algebra monad for
the associative operad, unitalization and the rectification bar objects.

Levels of a power system are chain complexes whose basis keys are chosen
by the builder.  Structure maps are stored as chain maps:

* ``swaps[m][k]`` acts on X_m by the transposition of spots k, k+1;
* ``lambdas[(m, n)]`` maps X_{m+n} to X_m (x) X_n (keys ``(a, b)``).

Permutations use the convention that the letter at position k moves to
position ``images[k]`` (0-indexed here).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Iterable, Sequence

from .algebra import AlgebraPresentation, PresentationError, decomposables_quotient
from .chain import ChainComplex, ChainMap, is_quasi_iso, tensor, unit_complex
from .linalg import SparseMatrix
from .simplicial import SimplicialChainComplex
from .words import add_term, enumerate_words, koszul_sign, word_degree


class PowerSystemError(ValueError):
    """A structural identity failed; the message names it."""


def image(f: ChainMap, key) -> dict:
    """Image of one basis element as a key combination."""
    d, i = f.source.index[key]
    col = f.at(d).cols[i]
    keys = f.target.bases.get(d, [])
    return {keys[r]: c for r, c in col.items()}


def _map(source: ChainComplex, target: ChainComplex, f: Callable) -> ChainMap:
    return ChainMap.from_function(source, target, f, strict=False, validate=False)


def _same(f: ChainMap, g: ChainMap, bound: int | None = None) -> int | None:
    for d in sorted(set(f.source.bases) | set(g.source.bases)):
        if bound is not None and d > bound:
            continue
        if f.at(d) != g.at(d):
            return d
    return None


# ---------------------------------------------------------------------------
# Delta morphisms

@dataclass(frozen=True)
class DeltaMorphism:
    """Weakly increasing map {1..j} -> {1..m}; ``images`` are 1-based."""

    j: int
    m: int
    images: tuple[int, ...]

    def __post_init__(self):
        if len(self.images) != self.j:
            raise ValueError("images must have length j")
        if any(not 1 <= v <= self.m for v in self.images):
            raise ValueError("images out of range")
        if any(a > b for a, b in zip(self.images, self.images[1:])):
            raise ValueError("images must be weakly increasing")

    @classmethod
    def from_blocks(cls, blocks: Sequence[int]) -> "DeltaMorphism":
        images = tuple(i + 1 for i, b in enumerate(blocks) for _ in range(b))
        return cls(sum(blocks), len(blocks), images)

    @classmethod
    def identity(cls, m: int) -> "DeltaMorphism":
        return cls(m, m, tuple(range(1, m + 1)))

    @property
    def blocks(self) -> tuple[int, ...]:
        """Fibre sizes j_1, ..., j_m."""
        out = [0] * self.m
        for v in self.images:
            out[v - 1] += 1
        return tuple(out)

    def fibre(self, i: int) -> tuple[int, ...]:
        """1-based positions mapping to i."""
        return tuple(k + 1 for k, v in enumerate(self.images) if v == i)

    def then(self, psi: "DeltaMorphism") -> "DeltaMorphism":
        """psi o self."""
        if psi.j != self.m:
            raise ValueError("morphisms are not composable")
        return DeltaMorphism(self.j, psi.m, tuple(psi.images[v - 1] for v in self.images))

    def concat(self, other: "DeltaMorphism") -> "DeltaMorphism":
        """theta + phi, side by side."""
        return DeltaMorphism(self.j + other.j, self.m + other.m,
                             self.images + tuple(v + self.m for v in other.images))


def all_delta_morphisms(j: int, m: int) -> Iterable[DeltaMorphism]:
    for images in itertools.combinations_with_replacement(range(1, m + 1), j):
        yield DeltaMorphism(j, m, tuple(images))


# ---------------------------------------------------------------------------
# power systems

class PowerSystem:
    def __init__(self, ring, levels: dict[int, ChainComplex], swaps: dict[int, list[ChainMap]],
                 lambdas: dict[tuple[int, int], ChainMap], augmentation: ChainMap | None = None,
                 top: int | None = None):
        self.ring = ring
        self.levels = levels
        self.swaps = swaps
        self.lambdas = lambdas
        self.augmentation = augmentation
        self.top = top
        # keys of X_m (x) X_n that lie inside the caps; None means all
        self.tensor_filter: Callable[[object], bool] | None = None

    @property
    def cap(self) -> int:
        return max(self.levels)

    def permutation_map(self, m: int, images: Sequence[int]) -> ChainMap:
        """Action of a permutation of spots, built from adjacent swaps."""
        arrangement = list(range(m))  # arrangement[pos] = original letter
        result = ChainMap.identity(self.levels[m])
        changed = True
        while changed:
            changed = False
            for pos in range(m - 1):
                if images[arrangement[pos]] > images[arrangement[pos + 1]]:
                    arrangement[pos], arrangement[pos + 1] = arrangement[pos + 1], arrangement[pos]
                    result = self.swaps[m][pos] @ result
                    changed = True
        return result

    def block_switch(self, m: int, n: int) -> ChainMap:
        """tau_{m,n}: the first block of m spots moves past the last n."""
        images = [k + n for k in range(m)] + [k - m for k in range(m, m + n)]
        return self.permutation_map(m + n, images)

    def twist(self, m: int, n: int) -> ChainMap:
        a, b = self.levels[m], self.levels[n]
        src, tgt = tensor(a, b), tensor(b, a)
        da, db = a.index, b.index

        def f(key):
            x, y = key
            s = self.ring.sign(da[x][0] * db[y][0])
            return {(y, x): s}
        return _map(src, tgt, f)

    def iterated_lambda(self, parts: Sequence[int]) -> Callable[[object], dict]:
        """lambda_{m_1,...,m_r} as a function to tuples of keys."""
        def f(key):
            if len(parts) == 1:
                return {(key,): 1}
            head, rest = parts[0], parts[1:]
            out: dict = {}
            for (a, b), c in image(self.lambdas[(head, sum(rest))], key).items():
                for tail, c2 in self.iterated_lambda(rest)(b).items():
                    add_term(self.ring, out, (a,) + tail, c * c2)
            return out
        return f

    # validation ---------------------------------------------------------
    def validate(self, strict: bool = True, window: int | None = None) -> dict:
        """Check Coxeter relations, lambda-equivariance, coassociativity and
        partiality; returns a report and raises on the first failure."""
        report = {"coxeter": True, "equivariance": True, "coassociativity": True, "partiality": True}
        for m, gens in self.swaps.items():
            ident = ChainMap.identity(self.levels[m])
            for k, g in enumerate(gens):
                if _same(g @ g, ident) is not None:
                    raise PowerSystemError(f"swap {k} on level {m} is not an involution")
                if k + 1 < len(gens):
                    h = gens[k + 1]
                    if _same(g @ h @ g, h @ g @ h) is not None:
                        raise PowerSystemError(f"braid relation fails for swaps {k}, {k + 1} on level {m}")
                for l in range(k + 2, len(gens)):
                    if _same(g @ gens[l], gens[l] @ g) is not None:
                        raise PowerSystemError(f"swaps {k} and {l} do not commute on level {m}")
        for (m, n), lam in self.lambdas.items():
            if (n, m) not in self.lambdas:
                continue
            lhs = self.lambdas[(n, m)] @ self.block_switch(m, n)
            rhs = self.twist(m, n) @ lam
            if _same(lhs, rhs) is not None:
                raise PowerSystemError(f"lambda_{{{n},{m}}} o tau_{{{m},{n}}} != twist o lambda_{{{m},{n}}}")
        for (l, mn), lam in self.lambdas.items():
            for m in range(1, mn):
                n = mn - m
                if (l + m, n) not in self.lambdas or (m, n) not in self.lambdas or (l, m) not in self.lambdas:
                    continue
                for key in self.levels[l + mn].index:
                    left: dict = {}
                    for (ab, c), v in image(self.lambdas[(l + m, n)], key).items():
                        for (a, b), v2 in image(self.lambdas[(l, m)], ab).items():
                            add_term(self.ring, left, (a, b, c), v * v2)
                    right: dict = {}
                    for (a, bc), v in image(lam, key).items():
                        for (b, c), v2 in image(self.lambdas[(m, n)], bc).items():
                            add_term(self.ring, right, (a, b, c), v * v2)
                    if left != right:
                        raise PowerSystemError(f"coassociativity fails for ({l},{m},{n}) at {key!r}")
        hi = window if window is not None else self.cap + 1
        for (m, n), lam in self.lambdas.items():
            if not strict and m + n > 2:
                continue
            if self.tensor_filter is not None:
                lam = _restrict_target(lam, self.tensor_filter)
            if not is_quasi_iso(lam, (min(lam.source.bases, default=0), hi)):
                report["partiality"] = False
                raise PowerSystemError(f"lambda_{{{m},{n}}} is not a quasi-isomorphism")
        report["tidy"] = "yes (field coefficients)" if self.ring.is_field else "undecided over Z"
        return report


def true_power_system(alg: AlgebraPresentation, cap: int, top: int | None = None) -> PowerSystem:
    """X_m = A^(m) with identity lambdas and Koszul-signed swaps."""
    ring = alg.ring
    levels = {}
    for m in range(0, cap + 1):
        bases: dict[int, list] = {}
        for w in enumerate_words(alg, m, top):
            bases.setdefault(word_degree(alg, w), []).append(w)
        from .words import leibniz

        levels[m] = ChainComplex.from_function(ring, bases, lambda w: leibniz(alg, w), strict=False)
    swaps = {}
    for m in range(2, cap + 1):
        gens = []
        for k in range(m - 1):
            def f(w, k=k):
                s = ring.sign(alg.degrees[w[k]] * alg.degrees[w[k + 1]])
                return {w[:k] + (w[k + 1], w[k]) + w[k + 2:]: s}
            gens.append(_map(levels[m], levels[m], f))
        swaps[m] = gens
    lambdas = {}
    for m in range(1, cap):
        for n in range(1, cap - m + 1):
            target = tensor(levels[m], levels[n])
            lambdas[(m, n)] = _map(levels[m + n], target, lambda w, m=m: {(w[:m], w[m:]): 1})
    aug = None
    if alg.augmentation is not None and cap >= 1:
        aug = _map(levels[1], unit_complex(ring, ()),
                   lambda w: {(): alg.eps(w[0])} if alg.ring.reduce(alg.eps(w[0])) else {})
    ps = PowerSystem(ring, levels, swaps, lambdas, aug, top)
    ps.presentation = alg
    return ps


def augment_spot(x: PowerSystem, m: int, j: int) -> ChainMap:
    """e_j : X_m -> X_{m-1}, augmentation at spot j (1-based)."""
    if x.augmentation is None:
        raise PowerSystemError("power system has no augmentation")
    if not 1 <= j <= m:
        raise PowerSystemError("spot out of range")
    ring = x.ring
    if m == 1:
        return _map(x.levels[1], x.levels[0], lambda key: {
            k: c for k, c in ((x.levels[0].bases[0][0], v) for v in image(x.augmentation, key).values())})
    lam = x.lambdas[(1, m - 1)]

    def e1(key):
        out: dict = {}
        for (a, b), c in image(lam, key).items():
            for _, v in image(x.augmentation, a).items():
                add_term(ring, out, b, c * v)
        return out

    first = _map(x.levels[m], x.levels[m - 1], e1)
    if j == 1:
        return first
    images = [k + 1 for k in range(j - 1)] + [0] + list(range(j, m))
    return first @ x.permutation_map(m, images)


# ---------------------------------------------------------------------------
# partial associative algebras

def block_multiply(alg: AlgebraPresentation, w: tuple, blocks: Sequence[int]) -> dict:
    """Multiply consecutive blocks of a word; empty blocks insert the unit."""
    ring = alg.ring
    parts: list[dict] = []
    pos = 0
    for b in blocks:
        if b == 0:
            if alg.unit is None:
                raise PowerSystemError("unit insertion needs a unit")
            parts.append(dict(alg.unit))
        else:
            acc = {w[pos]: 1}
            for t in range(pos + 1, pos + b):
                acc = alg.mul_vec(acc, {w[t]: 1})
            parts.append(acc)
        pos += b
    out: dict = {}
    for combo in itertools.product(*[list(p.items()) for p in parts]):
        c = 1
        for _, v in combo:
            c *= v
        add_term(ring, out, tuple(k for k, _ in combo), c)
    return out


class PartialAssocAlgebra:
    """A power system with a functor from weakly increasing maps."""

    def __init__(self, system: PowerSystem, alg: AlgebraPresentation,
                 action: Callable[[DeltaMorphism, tuple], dict] | None = None):
        self.system = system
        self.alg = alg
        self._action = action or (lambda phi, w: block_multiply(alg, w, phi.blocks))

    def structure_map(self, phi: DeltaMorphism) -> ChainMap:
        x = self.system
        return _map(x.levels[phi.j], x.levels[phi.m], lambda w: self._action(phi, w))

    def validate(self, cap: int | None = None) -> None:
        """Functoriality on all composable pairs and the concatenation square."""
        x = self.system
        cap = x.cap if cap is None else cap
        for m in range(cap + 1):
            if _same(self.structure_map(DeltaMorphism.identity(m)), ChainMap.identity(x.levels[m])) is not None:
                raise PowerSystemError(f"X_id is not the identity on level {m}")
        maps = {}
        for j in range(cap + 1):
            for m in range(cap + 1):
                for phi in all_delta_morphisms(j, m):
                    if m == 0 and j > 0:
                        continue
                    maps[phi] = self.structure_map(phi)
        for phi, f in maps.items():
            for psi in (p for p in maps if p.j == phi.m):
                comp = phi.then(psi)
                if comp not in maps:
                    continue
                d = _same(maps[psi] @ f, maps[comp], x.top)
                if d is not None:
                    raise PowerSystemError(
                        f"functoriality fails: X({psi.images}) o X({phi.images}) != X of the composite, degree {d}")
        for theta, phi in itertools.product(list(maps), repeat=2):
            j, m = theta.j + phi.j, theta.m + phi.m
            if j > cap or m > cap or theta.m == 0 or phi.m == 0 or theta.j == 0 or phi.j == 0:
                continue
            both = maps.get(theta.concat(phi))
            if both is None or (theta.m, phi.m) not in x.lambdas or (theta.j, phi.j) not in x.lambdas:
                continue
            lam_src, lam_tgt = x.lambdas[(theta.j, phi.j)], x.lambdas[(theta.m, phi.m)]
            for key in x.levels[j].index:
                left: dict = {}
                for k2, c in image(both, key).items():
                    for pair, c2 in image(lam_tgt, k2).items():
                        add_term(x.ring, left, pair, c * c2)
                right: dict = {}
                for (a, b), c in image(lam_src, key).items():
                    for a2, ca in image(maps[theta], a).items():
                        for b2, cb in image(maps[phi], b).items():
                            add_term(x.ring, right, (a2, b2), c * ca * cb)
                if left != right:
                    raise PowerSystemError(
                        f"concatenation square fails for {theta.images} + {phi.images} at {key!r}")


def partial_from_presentation(alg: AlgebraPresentation, cap: int, top: int | None = None,
                              validate: bool = True) -> PartialAssocAlgebra:
    if not alg.has("associative"):
        raise PresentationError("partial associative algebra needs an associative presentation")
    pa = PartialAssocAlgebra(true_power_system(alg, cap, top), alg)
    if validate:
        pa.validate()
    return pa


# ---------------------------------------------------------------------------
# unitalization

def subsets_binary(m: int) -> list[tuple[int, ...]]:
    """Subsets of {1..m} in binary-counter order."""
    return [tuple(k + 1 for k in range(m) if mask >> k & 1) for mask in range(1 << m)]


def unitalize_system(alg: AlgebraPresentation, cap: int) -> PartialAssocAlgebra:
    """KN_m = sum over s in [m] of N^(|s|), with the induced structure."""
    if alg.unit is not None:
        raise PresentationError("unitalization needs a non-unital presentation")
    ring = alg.ring
    levels = {}
    for m in range(0, cap + 1):
        bases: dict[int, list] = {}
        for s in subsets_binary(m):
            for w in enumerate_words(alg, len(s), None):
                bases.setdefault(word_degree(alg, w), []).append((s, w))
        from .words import leibniz

        levels[m] = ChainComplex.from_function(
            ring, bases, lambda key: {(key[0], v): c for v, c in leibniz(alg, key[1]).items()}, strict=False)
    swaps = {}
    for m in range(2, cap + 1):
        gens = []
        for k in range(m - 1):
            def f(key, k=k):
                s, w = key
                a, b = k + 1, k + 2
                if a in s and b in s:
                    t = s.index(a)
                    sign = ring.sign(alg.degrees[w[t]] * alg.degrees[w[t + 1]])
                    return {(s, w[:t] + (w[t + 1], w[t]) + w[t + 2:]): sign}
                new = tuple(sorted(b if v == a else a if v == b else v for v in s))
                return {(new, w): 1}
            gens.append(_map(levels[m], levels[m], f))
        swaps[m] = gens
    lambdas = {}
    for m in range(1, cap):
        for n in range(1, cap - m + 1):
            def f(key, m=m):
                s, w = key
                first = tuple(v for v in s if v <= m)
                rest = tuple(v - m for v in s if v > m)
                return {((first, w[:len(first)]), (rest, w[len(first):])): 1}
            lambdas[(m, n)] = _map(levels[m + n], tensor(levels[m], levels[n]), f)
    aug = _map(levels[1], unit_complex(ring, ((), ())), lambda key: {((), ()): 1} if not key[0] else {})
    system = PowerSystem(ring, levels, swaps, lambdas, aug)

    def action(phi: DeltaMorphism, key):
        s, w = key
        new_s, parts = [], []
        pos = {v: t for t, v in enumerate(s)}
        for i in range(1, phi.m + 1):
            inside = [pos[v] for v in phi.fibre(i) if v in pos]
            if not inside:
                continue
            new_s.append(i)
            acc = {w[inside[0]]: 1}
            for t in inside[1:]:
                acc = alg.mul_vec(acc, {w[t]: 1})
            parts.append(acc)
        out: dict = {}
        for combo in itertools.product(*[list(p.items()) for p in parts]):
            c = 1
            for _, v in combo:
                c *= v
            add_term(ring, out, (tuple(new_s), tuple(k for k, _ in combo)), c)
        return out

    return PartialAssocAlgebra(system, alg, action)


def indecomposables(alg: AlgebraPresentation) -> tuple[ChainComplex, ChainMap]:
    """QN and the canonical surjection N -> QN."""
    qn, proj, _ = decomposables_quotient(alg)
    comp = alg.complex()
    maps = {d: proj[d] for d in comp.bases if qn.rank(d)}
    return qn, ChainMap(comp, qn, maps)


# ---------------------------------------------------------------------------
# the free-algebra monad for the associative operad

def weak_compositions(length: int, max_sum: int) -> list[tuple[int, ...]]:
    """Tuples of non-negative integers of a given length with sum <= max_sum."""
    out = []

    def rec(prefix, left, room):
        if left == 0:
            out.append(tuple(prefix))
            return
        for v in range(room + 1):
            prefix.append(v)
            rec(prefix, left - 1, room - v)
            prefix.pop()

    rec([], length, max_sum)
    return out


def block_sums(inner: Sequence[int], outer: Sequence[int]) -> tuple[int, ...]:
    """Group ``inner`` into consecutive blocks of sizes ``outer`` and sum."""
    out, pos = [], 0
    for b in outer:
        out.append(sum(inner[pos:pos + b]))
        pos += b
    return tuple(out)


def _block_permutation(images: Sequence[int], sizes: Sequence[int]) -> list[int]:
    """Spots of X_{sum sizes} moved along with a permutation of blocks."""
    m = len(sizes)
    starts_old = [sum(sizes[:k]) for k in range(m)]
    new_order = sorted(range(m), key=lambda k: images[k])
    starts_new = {}
    pos = 0
    for k in new_order:
        starts_new[k] = pos
        pos += sizes[k]
    out = [0] * sum(sizes)
    for k in range(m):
        for t in range(sizes[k]):
            out[starts_old[k] + t] = starts_new[k] + t
    return out


def free_assoc(x: PowerSystem, weight_cap: int, levels_cap: int | None = None) -> PowerSystem:
    """(A#X)_m = sum over j in N^m with sum j <= W of X_{sum j}."""
    ring = x.ring
    M = levels_cap if levels_cap is not None else weight_cap
    W = min(weight_cap, x.cap)
    levels = {}
    dropped = []
    for m in range(0, M + 1):
        bases: dict[int, list] = {}
        for j in weak_compositions(m, weight_cap):
            if sum(j) > W:
                dropped.append(j)
                continue
            lvl = x.levels[sum(j)]
            for d in lvl.degrees:
                bases.setdefault(d, []).extend((j, key) for key in lvl.bases[d])
        levels[m] = _lift_complex(ring, bases, x)
    swaps = {}
    for m in range(2, M + 1):
        gens = []
        for k in range(m - 1):
            def f(key, k=k):
                j, xk = key
                images = list(range(m))
                images[k], images[k + 1] = k + 1, k
                new_j = list(j)
                new_j[k], new_j[k + 1] = j[k + 1], j[k]
                perm = x.permutation_map(sum(j), _block_permutation(images, j)) if sum(j) > 1 else None
                img = image(perm, xk) if perm is not None else {xk: 1}
                return {(tuple(new_j), v): c for v, c in img.items()}
            gens.append(_map(levels[m], levels[m], f))
        swaps[m] = gens
    lambdas = {}
    for m in range(1, M):
        for n in range(1, M - m + 1):
            def f(key, m=m):
                j, xk = key
                a, b = sum(j[:m]), sum(j[m:])
                if a == 0 or b == 0:
                    unit = x.levels[0].bases[0][0]
                    pair = ((j[:m], unit if a == 0 else xk), (j[m:], xk if a == 0 else unit))
                    return {pair: 1}
                return {((j[:m], u), (j[m:], v)): c for (u, v), c in image(x.lambdas[(a, b)], xk).items()}
            lambdas[(m, n)] = _map(levels[m + n], tensor(levels[m], levels[n]), f)
    out = PowerSystem(ring, levels, swaps, lambdas)
    out.tensor_filter = lambda key: sum(key[0][0]) + sum(key[1][0]) <= W
    out.dropped = dropped
    out.base = x
    out.weight_cap = weight_cap
    return out


def _restrict_target(f: ChainMap, keep: Callable[[object], bool]) -> ChainMap:
    """Corestrict to the span of target keys accepted by ``keep``, which
    must be a subcomplex containing the image."""
    tgt = f.target
    bases = {d: [k for k in keys if keep(k)] for d, keys in tgt.bases.items()}
    sub = ChainComplex.from_function(tgt.ring, bases, lambda k: image_d(tgt, k), strict=False, validate=False)
    return _map(f.source, sub, lambda k: image(f, k))


def _lift_complex(ring, bases, x: PowerSystem) -> ChainComplex:
    def d(key):
        j, xk = key
        return {(j, v): c for v, c in image_d(x.levels[sum(j)], xk).items()}
    return ChainComplex.from_function(ring, bases, d, strict=False)


def image_d(c: ChainComplex, key) -> dict:
    deg, i = c.index[key]
    if deg not in c.diffs:
        return {}
    keys = c.bases[deg - 1]
    return {keys[r]: v for r, v in c.d(deg).cols[i].items()}


def monad_unit(x: PowerSystem, fx: PowerSystem, m: int) -> ChainMap:
    return _map(x.levels[m], fx.levels[m], lambda key: {((1,) * m, key): 1})


def monad_mult(ffx: PowerSystem, fx: PowerSystem, m: int) -> ChainMap:
    def f(key):
        k, (j, xk) = key
        return {(block_sums(j, k), xk): 1}
    return _map(ffx.levels[m], fx.levels[m], f)


def apply_functor(f_levels: Callable[[int], ChainMap], fx: PowerSystem, fy: PowerSystem, m: int) -> ChainMap:
    """A#(f) on level m from levelwise maps f_k."""
    cache: dict[int, ChainMap] = {}

    def g(key):
        j, xk = key
        s = sum(j)
        if s not in cache:
            cache[s] = f_levels(s)
        return {(j, v): c for v, c in image(cache[s], xk).items()}
    return _map(fx.levels[m], fy.levels[m], g)


def check_monad_laws(x: PowerSystem, weight_cap: int, level: int) -> dict:
    """Unit and associativity laws of A# on one level, within caps."""
    fx = free_assoc(x, weight_cap)
    ffx = free_assoc(fx, weight_cap)
    fffx = free_assoc(ffx, weight_cap)
    m = level
    mu = monad_mult(ffx, fx, m)
    ident = ChainMap.identity(fx.levels[m])
    left_unit = mu @ monad_unit(fx, ffx, m)
    right_unit = mu @ apply_functor(lambda k: monad_unit(x, fx, k), fx, ffx, m)
    mu_ff = monad_mult(fffx, ffx, m)
    assoc_l = mu @ monad_mult(fffx, ffx, m)
    assoc_r = mu @ apply_functor(lambda k: monad_mult(ffx, fx, k), fffx, ffx, m)
    del mu_ff
    return {
        "left_unit": _same(left_unit, ident) is None,
        "right_unit": _same(right_unit, ident) is None,
        "associativity": _same(assoc_l, assoc_r) is None,
    }


# ---------------------------------------------------------------------------
# rectification

def _nested_layers(m: int, depth: int, power_cap: int):
    """Sequences (c_0, ..., c_depth) with c_0 in N^m, c_{i+1} in N^{sum c_i},
    every sum <= power_cap."""
    def rec(prefix, length, left):
        if left == 0:
            yield tuple(prefix)
            return
        for c in weak_compositions(length, power_cap):
            prefix.append(c)
            yield from rec(prefix, sum(c), left - 1)
            prefix.pop()
    yield from rec([], m, depth + 1)


def standard_resolution(pa: PartialAssocAlgebra, level: int, cap: int, power_cap: int,
                        top: int | None = None) -> tuple[SimplicialChainComplex, ChainMap]:
    """Level ``level`` of B(A#, A#, A) truncated at simplicial cap and power cap.

    Keys are ``(layers, word)``.  Faces merge adjacent layers (monad
    multiplication) and the last face applies the algebra action; degeneracies
    insert identity layers.  Returns the object and its augmentation on
    simplicial level 0 into A_level.
    """
    x = pa.system
    ring = x.ring
    top = top if top is not None else cap
    levels = []
    for q in range(cap + 1):
        bases: dict[int, list] = {}
        for layers in _nested_layers(level, q, power_cap):
            lvl = x.levels[sum(layers[-1])]
            for d in lvl.degrees:
                if d > top - q:
                    continue
                bases.setdefault(d, []).extend((layers, key) for key in lvl.bases[d])
        def dfun(key):
            layers, xk = key
            return {(layers, v): c for v, c in image_d(x.levels[sum(layers[-1])], xk).items()}
        levels.append(ChainComplex.from_function(ring, bases, dfun, strict=False, validate=False))

    def face(q, i):
        def f(key):
            layers, xk = key
            if i < q:
                merged = block_sums(layers[i + 1], layers[i])
                return {(layers[:i] + (merged,) + layers[i + 2:], xk): 1}
            phi = DeltaMorphism.from_blocks(layers[q])
            return {(layers[:q], v): c for v, c in pa._action(phi, xk).items()}
        return _map(levels[q], levels[q - 1], f)

    def degen(q, i):
        def f(key):
            layers, xk = key
            ident = (1,) * sum(layers[i])
            return {(layers[:i + 1] + (ident,) + layers[i + 1:], xk): 1}
        return _map(levels[q], levels[q + 1], f)

    faces = [[]] + [[face(q, i) for i in range(q + 1)] for q in range(1, cap + 1)]
    degens = [[degen(q, i) for i in range(q + 1)] for q in range(cap)]
    obj = SimplicialChainComplex(levels, faces, degens, top=top)
    target = x.levels[level]
    aug = _map(levels[0], target, lambda key: pa._action(DeltaMorphism.from_blocks(key[0][0]), key[1]))
    return obj, aug


def rectify(pa: PartialAssocAlgebra, cap: int, power_cap: int, top: int | None = None,
            level: int = 1, validate: bool = True) -> tuple[ChainComplex, ChainMap]:
    """Realized truncated rectification and its augmentation to A_level.

    The augmentation is a chain map from the normalized total complex to
    A_level placed in simplicial degree 0.
    """
    obj, aug = standard_resolution(pa, level, cap, power_cap, top)
    if validate:
        obj.validate()
    norm = obj.normalize()
    total = norm.total
    target = aug.target

    def f(key):
        (p, e), base = key
        if p != 0:
            return {}
        return image(aug, base)
    return total, ChainMap.from_function(total, target, f, strict=False)
