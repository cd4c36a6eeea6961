"""The quotient path group in algebraic form: reduced surface-group words
with a central real "area" coordinate.

Elements multiply by concatenation; every extraction of the surface relator
R = a1 b1 a1^-1 b1^-1 ... (or its inverse) during normalization shifts the
central coordinate t by +1 (resp. -1).  Normal forms: genus 0 stores only
t mod 1, genus 1 uses the Heisenberg form a^p b^q, genus >= 2 keeps
Dehn-reduced words (not unique: equality always goes through word_problem,
which is sound for surface groups by small cancellation).
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence, Union

from .policy import DEFAULT_POLICY, NumericPolicy
from .surfaces import (
    MalformedLoopError,
    MeshLoop,
    SurfaceMesh,
    alpha_loop,
    beta_loop,
    enclosed_area,
    loop_concat,
    loop_reverse,
    torus_windings,
    wrap_mod1,
)


class GenusMismatchError(ValueError):
    """Operands belong to groups of different genus."""


# Letters are nonzero ints: a_i = i, b_i = g + i, inverses negative.

def clip(letters: Iterable[int]) -> tuple[int, ...]:
    """Free reduction: delete adjacent letter-inverse pairs until none remain.

    Deletion order does not matter, so one stack pass is enough.
    """
    out: list[int] = []
    for letter in letters:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(int(letter))
    return tuple(out)


def relator_letters(genus: int) -> tuple[int, ...]:
    """The surface relator: product of commutators [a_i, b_i], length 4g."""
    letters: list[int] = []
    for i in range(1, genus + 1):
        letters.extend((i, genus + i, -i, -(genus + i)))
    return tuple(letters)


@dataclass(frozen=True)
class SurfaceWord:
    """A freely reduced word in the 2g surface-group generators."""

    genus: int
    letters: tuple[int, ...]

    def __post_init__(self):
        letters = tuple(int(l) for l in self.letters)
        for l in letters:
            if l == 0 or abs(l) > 2 * self.genus:
                raise ValueError(f"letter {l} outside the genus-{self.genus} alphabet")
        if letters != clip(letters):
            raise ValueError("word is not freely reduced")
        object.__setattr__(self, "letters", letters)

    def __str__(self) -> str:
        return format_letters(self.letters, self.genus)


_TOKEN = re.compile(r"^([ab])([0-9]+)(\^-1)?$")


def parse_letters(text: str, genus: int) -> tuple[int, ...]:
    letters = []
    for token in text.split():
        m = _TOKEN.match(token)
        if not m:
            raise ValueError(f"cannot parse word token {token!r}")
        kind, idx, inv = m.group(1), int(m.group(2)), m.group(3)
        if not (1 <= idx <= genus):
            raise ValueError(f"generator index {idx} exceeds genus {genus}")
        letter = idx if kind == "a" else genus + idx
        letters.append(-letter if inv else letter)
    return tuple(letters)


def format_letters(letters: Sequence[int], genus: int) -> str:
    parts = []
    for l in letters:
        idx = abs(l)
        name = f"a{idx}" if idx <= genus else f"b{idx - genus}"
        parts.append(name + ("^-1" if l < 0 else ""))
    return " ".join(parts)


# ---------------------------------------------------------------------------
# Dehn normalization (genus >= 2)

@lru_cache(maxsize=None)
def _dehn_table(genus: int) -> dict[tuple[int, ...], tuple[tuple[int, ...], int]]:
    """All cyclic rotations of R and R^-1, keyed by their (2g+1)-prefixes.

    Any subword of the cyclic relator longer than half its length uniquely
    identifies the rotation it starts; surface relators have no repeated
    length-2 subwords, so the keys never collide.
    """
    table: dict[tuple[int, ...], tuple[tuple[int, ...], int]] = {}
    half = 2 * genus + 1
    for word, sign in ((relator_letters(genus), 1),
                       (tuple(-l for l in reversed(relator_letters(genus))), -1)):
        doubled = word + word
        for k in range(len(word)):
            rotation = doubled[k:k + len(word)]
            key = rotation[:half]
            if key in table and table[key] != (rotation, sign):
                raise AssertionError("ambiguous relator prefix")
            table[key] = (rotation, sign)
    return table


def _dehn_reduce(letters: tuple[int, ...], genus: int) -> tuple[tuple[int, ...], int]:
    """Shorten until no cyclic-relator subword longer than 2g remains.

    Each replacement swaps a subword u (relator rotation prefix, length
    > 2g) for the inverse of the complementary piece, shifting t by the
    relator sign; the word strictly shortens, so this terminates.
    """
    table = _dehn_table(genus)
    half = 2 * genus + 1
    full = 4 * genus
    t_delta = 0
    word = clip(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(word) - half + 1):
            hit = table.get(word[i:i + half])
            if hit is None:
                continue
            rotation, sign = hit
            j = half
            while j < full and i + j < len(word) and word[i + j] == rotation[j]:
                j += 1
            complement = rotation[j:]
            replacement = tuple(-l for l in reversed(complement))
            word = clip(word[:i] + replacement + word[i + j:])
            t_delta += sign
            changed = True
            break
    return word, t_delta


def _heisenberg_normalize(letters: Sequence[int]) -> tuple[int, int, float]:
    """Genus-1 normal form a^p b^q; moving a past b costs one relator.

    Swapping b^s a^r -> a^r b^s extracts J^(-s r), so each a-letter picks up
    minus the net b-exponent standing before it.
    """
    p = q = 0
    t_delta = 0.0
    b_before = 0
    for l in letters:
        if abs(l) == 1:
            tau = 1 if l > 0 else -1
            p += tau
            t_delta -= tau * b_before
        else:
            sigma = 1 if l > 0 else -1
            q += sigma
            b_before += sigma
    return p, q, t_delta


def _heisenberg_letters(p: int, q: int) -> tuple[int, ...]:
    return tuple([1] * p if p >= 0 else [-1] * (-p)) + tuple([2] * q if q >= 0 else [-2] * (-q))


WordLike = Union[str, SurfaceWord, Sequence[int]]


class GammaRElement:
    """(normal-form word, central area coordinate t).

    The central generator is J = (empty word, 1); for genus 0 the word is
    empty and t lives in R/Z, represented in (-1/2, 1/2].
    """

    __slots__ = ("genus", "word", "t")

    def __init__(self, genus: int, word: WordLike = (), t: float = 0.0):
        if genus < 0:
            raise ValueError("genus must be nonnegative")
        if isinstance(word, SurfaceWord):
            if word.genus != genus:
                raise GenusMismatchError("word genus does not match element genus")
            letters: tuple[int, ...] = word.letters
        elif isinstance(word, str):
            letters = parse_letters(word, genus)
        else:
            letters = tuple(int(l) for l in word)
        t = float(t)

        if genus == 0:
            if letters:
                raise ValueError("genus-0 elements have a trivial word part")
            normal, t = (), wrap_mod1(t)
        elif genus == 1:
            p, q, dt = _heisenberg_normalize(letters)
            normal, t = _heisenberg_letters(p, q), t + dt
        else:
            normal, dt = _dehn_reduce(letters, genus)
            t = t + dt
        object.__setattr__(self, "genus", genus)
        object.__setattr__(self, "word", SurfaceWord(genus, normal))
        object.__setattr__(self, "t", t)

    def __setattr__(self, name, value):
        raise AttributeError("GammaRElement is immutable")

    def __eq__(self, other) -> bool:
        # structural (normal-form) equality; semantic equality is word_problem
        return (
            isinstance(other, GammaRElement)
            and self.genus == other.genus
            and self.word.letters == other.word.letters
            and self.t == other.t
        )

    def __hash__(self):
        return hash((self.genus, self.word.letters, self.t))

    def __repr__(self) -> str:
        word = str(self.word) or "(empty)"
        return f"GammaRElement(genus={self.genus}, word='{word}', t={self.t})"


def gamma_identity(genus: int) -> GammaRElement:
    return GammaRElement(genus, (), 0.0)


def gamma_mul(x: GammaRElement, y: GammaRElement) -> GammaRElement:
    """Concatenate and renormalize; t picks up one unit per relator extracted."""
    if x.genus != y.genus:
        raise GenusMismatchError(f"genus mismatch: {x.genus} vs {y.genus}")
    g = x.genus
    if g == 0:
        return GammaRElement(0, (), x.t + y.t)
    if g == 1:
        p, q, _ = _heisenberg_normalize(x.word.letters)
        r, u, _ = _heisenberg_normalize(y.word.letters)
        return GammaRElement(1, _heisenberg_letters(p + r, q + u), x.t + y.t - q * r)
    return GammaRElement(g, x.word.letters + y.word.letters, x.t + y.t)


def gamma_inv(x: GammaRElement) -> GammaRElement:
    g = x.genus
    if g == 0:
        return GammaRElement(0, (), -x.t)
    if g == 1:
        p, q, _ = _heisenberg_normalize(x.word.letters)
        return GammaRElement(1, _heisenberg_letters(-p, -q), -x.t - p * q)
    inverse = tuple(-l for l in reversed(x.word.letters))
    return GammaRElement(g, inverse, -x.t)


def word_problem(
    x: GammaRElement,
    y: GammaRElement,
    *,
    policy: NumericPolicy = DEFAULT_POLICY,
) -> bool:
    """Equality in the group: x y^-1 reduces to the identity.

    Genus >= 2 relies on Dehn's algorithm being complete for surface
    relators: a nonempty Dehn-reduced word is never trivial.
    """
    z = gamma_mul(x, gamma_inv(y))
    if z.word.letters:
        return False
    # genus 0 already stores t as the canonical representative mod 1
    return abs(z.t) <= policy.t_tol


# ---------------------------------------------------------------------------
# mesh loops -> group elements

def std_loop(mesh: SurfaceMesh, p: int, q: int) -> MeshLoop:
    """Standard representative: alpha cycle p times, then beta cycle q times."""
    a, b = alpha_loop(mesh), beta_loop(mesh)
    steps: tuple[tuple[int, int], ...] = ()
    block = a.steps if p >= 0 else loop_reverse(a).steps
    steps += block * abs(p)
    block = b.steps if q >= 0 else loop_reverse(b).steps
    steps += block * abs(q)
    return MeshLoop(mesh.basepoint, steps)


def loop_class(mesh: SurfaceMesh, loop: MeshLoop) -> GammaRElement:
    """Class of a based mesh loop in the area-quotient group.

    Genus 0: (empty, enclosed area mod 1).  Genus 1: period windings give
    the word a^p b^q and t is the area between the loop and the standard
    representative of (p, q).
    """
    if loop.base != mesh.basepoint:
        raise MalformedLoopError("loop must be based at the mesh basepoint")
    if mesh.genus == 0:
        return GammaRElement(0, (), enclosed_area(mesh, loop))
    p, q = torus_windings(mesh, loop)
    defect = enclosed_area(mesh, loop_concat(loop, loop_reverse(std_loop(mesh, p, q))))
    return GammaRElement(1, _heisenberg_letters(p, q), defect)


# ---------------------------------------------------------------------------
# JSON

def gamma_to_json(x: GammaRElement) -> dict:
    return {"genus": x.genus, "word": str(x.word), "t": x.t}


def gamma_from_json(obj: dict) -> GammaRElement:
    return GammaRElement(int(obj["genus"]), str(obj["word"]), float(obj["t"]))
