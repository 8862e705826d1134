"""The Moore partial algebra in symbolic form.

Cells are words in {a, b, c} with lengths; ``a`` and ``c`` letters carry
positive lengths and ``b`` letters non-negative ones.  A weakly increasing
map acts by summing lengths over fibres and by a family of little
intervals, one per ``a`` letter of the result.  Payloads stay formal.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import AlgebraPresentation, PresentationError, _replace
from .cubes import CubesElement, compose_at, full_compose, gamma_vec, unit_element
from .power import DeltaMorphism
from .randgen import random_lengths, random_word

COLLAPSE_NOTE = "length parameters collapsed to points (strictly associative input)"


class MooreError(ValueError):
    pass


def _check_compatible(word: str, lengths: Sequence[Fraction]) -> None:
    if len(word) != len(lengths):
        raise MooreError("word and lengths differ in length")
    for x, r in zip(word, lengths):
        if x not in "abc":
            raise MooreError(f"letter {x!r} not in {{a,b,c}}")
        if r < 0 or (r == 0 and x != "b"):
            raise MooreError(f"length {r} not allowed for letter {x}")


def f_phi(phi: DeltaMorphism, word: str) -> str:
    """Image of a word under the functor attached to phi."""
    if len(word) != phi.j:
        raise MooreError("word length does not match the source of phi")
    out = []
    for i in range(1, phi.m + 1):
        letters = [word[k - 1] for k in phi.fibre(i)]
        if "a" in letters:
            out.append("a")
        elif all(x == "b" for x in letters):
            out.append("b")
        else:
            out.append("c")
    return "".join(out)


def d_phi(phi: DeltaMorphism, word: str, lengths: Sequence) -> tuple[str, tuple[Fraction, ...], list[CubesElement]]:
    """New word, summed lengths and one interval family per ``a`` of the result."""
    lengths = tuple(Fraction(r) for r in lengths)
    _check_compatible(word, lengths)
    y = f_phi(phi, word)
    s, elements = [], []
    for i in range(1, phi.m + 1):
        fib = phi.fibre(i)
        sub_w = "".join(word[k - 1] for k in fib)
        sub_r = [lengths[k - 1] for k in fib]
        s.append(sum(sub_r, Fraction(0)))
        if y[i - 1] == "a":
            elements.append(gamma_vec(sub_w, sub_r)[0])
    _check_compatible(y, s)
    return y, tuple(s), elements


@dataclass(frozen=True)
class MooreCell:
    word: str
    lengths: tuple[Fraction, ...]
    payload: object = "x"

    def __post_init__(self):
        object.__setattr__(self, "lengths", tuple(Fraction(r) for r in self.lengths))
        _check_compatible(self.word, self.lengths)


def moore_map(phi: DeltaMorphism, cell: MooreCell) -> tuple[MooreCell, list[CubesElement]]:
    """Apply phi; the payload becomes a formal action term."""
    if phi == DeltaMorphism.identity(phi.m):
        return cell, []
    y, s, elements = d_phi(phi, cell.word, cell.lengths)
    return MooreCell(y, s, ("act", tuple(elements), cell.payload)), elements


def compose_records(psi: DeltaMorphism, first_word: str, first: Sequence[CubesElement],
                    second: Sequence[CubesElement]) -> list[CubesElement]:
    """Combine the families from phi (on word ``first_word`` = f_phi(x)) and
    then psi into one family, composing operadically block by block."""
    a_pos = [k for k, x in enumerate(first_word, start=1) if x == "a"]
    slot = {k: t for t, k in enumerate(a_pos)}
    out, idx = [], 0
    z = f_phi(psi, first_word)
    for i in range(1, psi.m + 1):
        if z[i - 1] != "a":
            continue
        args = [first[slot[k]] for k in psi.fibre(i) if k in slot]
        out.append(full_compose(second[idx], args))
        idx += 1
    return out


# ---------------------------------------------------------------------------
# verification

def random_delta(rng: random.Random, j: int, m: int) -> DeltaMorphism:
    return DeltaMorphism(j, m, tuple(sorted(rng.randint(1, m) for _ in range(j))))


def check_composite(phi: DeltaMorphism, psi: DeltaMorphism, word: str, lengths) -> str | None:
    y, s, g = d_phi(phi, word, lengths)
    z, t, h = d_phi(psi, y, s)
    z2, t2, direct = d_phi(phi.then(psi), word, lengths)
    if z != z2:
        return "words differ"
    if t != t2:
        return "lengths differ"
    if compose_records(psi, y, g, h) != direct:
        return "interval families differ"
    return None


def check_naturality(phi: DeltaMorphism, word: str, lengths, k: int) -> str | None:
    """Letter k (1-based) is c; compare with a (via alpha) and b (via beta)."""
    if word[k - 1] != "c":
        raise MooreError("naturality is checked at a c letter")
    y, s, el = d_phi(phi, word, lengths)
    wa = word[:k - 1] + "a" + word[k:]
    ya, sa, ela = d_phi(phi, wa, lengths)
    if sa != s:
        return "alpha changes lengths"
    i = phi.images[k - 1]
    a_before = sum(1 for v in phi.fibre(i) if v < k and word[v - 1] == "a")
    pushed, idx = [], 0
    for pos, x in enumerate(ya, start=1):
        if x != "a":
            continue
        e = ela[idx]
        idx += 1
        if pos == i:
            e = compose_at(e, a_before + 1, unit_element(1))
            if y[pos - 1] != "a":
                if e != unit_element(1):
                    return "alpha leaves a non-empty family on a c letter"
                continue
        pushed.append(e)
    if pushed != el:
        return "alpha naturality fails"
    for a, b in zip(y, ya):
        if a != b and not (a == "c" and b == "a"):
            return "alpha image is not a morphism of words"
    wb = word[:k - 1] + "b" + word[k:]
    yb, sb, elb = d_phi(phi, wb, lengths)
    if sb != s or elb != el:
        return "beta naturality fails"
    for a, b in zip(y, yb):
        if a != b and not (a == "c" and b == "b"):
            return "beta image is not a morphism of words"
    return None


def _counterexample(kind, phi, psi, word, lengths, reason, k=None) -> dict:
    return {
        "check": kind,
        "phi": {"j": phi.j, "m": phi.m, "images": list(phi.images)},
        "psi": None if psi is None else {"j": psi.j, "m": psi.m, "images": list(psi.images)},
        "word": word,
        "lengths": [str(r) for r in lengths],
        "spot": k,
        "reason": reason,
    }


def replay(doc: dict | str) -> str | None:
    """Re-run a counterexample record; returns the failure reason or None."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    phi = DeltaMorphism(doc["phi"]["j"], doc["phi"]["m"], tuple(doc["phi"]["images"]))
    lengths = [Fraction(r) for r in doc["lengths"]]
    if doc["check"] == "composite":
        p = doc["psi"]
        return check_composite(phi, DeltaMorphism(p["j"], p["m"], tuple(p["images"])), doc["word"], lengths)
    return check_naturality(phi, doc["word"], lengths, doc["spot"])


@dataclass
class MooreReport:
    trials: int
    composite_checks: int = 0
    naturality_checks: int = 0
    zero_length_b: int = 0
    c_letters: int = 0
    counterexample: dict | None = None
    seed: int = 0

    @property
    def ok(self) -> bool:
        return self.counterexample is None

    def to_json(self) -> dict:
        return {"ok": self.ok, "trials": self.trials, "seed": self.seed,
                "composite_checks": self.composite_checks,
                "naturality_checks": self.naturality_checks,
                "zero_length_b": self.zero_length_b, "c_letters": self.c_letters,
                "counterexample": self.counterexample}


def verify_moore_functoriality(trials: int = 500, max_arity: int = 5, seed: int = 0) -> MooreReport:
    rng = random.Random(seed)
    report = MooreReport(trials, seed=seed)
    for _ in range(trials):
        j = rng.randint(0, max_arity)
        m = rng.randint(1, max_arity)
        q = rng.randint(1, max_arity)
        phi, psi = random_delta(rng, j, m), random_delta(rng, m, q)
        word = random_word(rng, j)
        lengths = random_lengths(rng, word)
        report.zero_length_b += sum(1 for x, r in zip(word, lengths) if x == "b" and r == 0)
        report.c_letters += word.count("c")
        reason = check_composite(phi, psi, word, lengths)
        report.composite_checks += 1
        if reason:
            report.counterexample = _counterexample("composite", phi, psi, word, lengths, reason)
            return report
        for k, x in enumerate(word, start=1):
            if x == "c":
                reason = check_naturality(phi, word, lengths, k)
                report.naturality_checks += 1
                if reason:
                    report.counterexample = _counterexample("naturality", phi, None, word, lengths, reason, k)
                    return report
    return report


def moore_homological(alg: AlgebraPresentation) -> AlgebraPresentation:
    """The collapsed Moore model: the presentation itself, annotated."""
    if not alg.has("associative"):
        raise PresentationError("the Moore collapse needs a strictly associative presentation")
    notes = dict(alg.annotations)
    notes["moore"] = COLLAPSE_NOTE
    return _replace(alg, annotations=notes)
