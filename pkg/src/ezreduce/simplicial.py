"""Simplicial sets generated by ordered simplicial complexes.

A simplex is a weakly increasing list of vertex ids; the face operator
``d_i`` deletes position ``i`` and the degeneracy ``s_i`` repeats it.  A
simplex is degenerate exactly when two adjacent vertices coincide.

Operator words are tuples of ``(kind, index)`` symbols with ``kind`` in
``{"d", "s"}``.  Words act right to left: the last symbol is applied first.
"""

from __future__ import annotations

import itertools
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Iterator, Sequence


class DimensionError(ValueError):
    """An operator index is out of range for the simplex it acts on."""


class Simplex(tuple):
    """A (possibly degenerate) simplex stored as its vertex list."""

    __slots__ = ()

    @property
    def dim(self) -> int:
        return len(self) - 1

    def face(self, i: int) -> "Simplex":
        if not 0 <= i <= self.dim or self.dim == 0:
            raise DimensionError(f"face d_{i} undefined on {self.dim}-simplex")
        return Simplex(self[:i] + self[i + 1:])

    def degeneracy(self, i: int) -> "Simplex":
        if not 0 <= i <= self.dim:
            raise DimensionError(f"degeneracy s_{i} undefined on {self.dim}-simplex")
        return Simplex(self[: i + 1] + self[i:])

    def degenerate_indices(self) -> frozenset:
        """Indices ``i`` with ``self == s_i(d_i self)``."""
        return frozenset(i for i in range(len(self) - 1) if self[i] == self[i + 1])

    def is_degenerate(self) -> bool:
        return any(self[i] == self[i + 1] for i in range(len(self) - 1))

    def pick(self, positions: Iterable[int]) -> "Simplex":
        """Vertex list at the given positions (repeats produce degeneracies)."""
        return Simplex(self[j] for j in positions)

    def relabel(self, vertices: Sequence[int]) -> "Simplex":
        """Image under the simplicial map ``j -> vertices[j]``."""
        return Simplex(vertices[v] for v in self)

    def __repr__(self) -> str:
        return "[" + ",".join(map(str, self)) + "]"


def is_degenerate(x: Sequence[int]) -> bool:
    return Simplex(x).is_degenerate()


# ---------------------------------------------------------------------------
# operator words


@dataclass(frozen=True)
class OperatorWord:
    """A composition ``s_{j_t}...s_{j_1} d_{i_1}...d_{i_s}`` in normal form.

    ``degeneracies`` is stored as written (strictly decreasing) and ``faces``
    likewise (strictly increasing).  ``cancellations`` records how many
    ``d s`` pairs collapsed to the identity while normalizing; it does not
    take part in equality.
    """

    degeneracies: tuple = ()
    faces: tuple = ()
    cancellations: int = field(default=0, compare=False)

    @property
    def symbols(self) -> tuple:
        return tuple(("s", j) for j in self.degeneracies) + tuple(("d", i) for i in self.faces)

    def __str__(self) -> str:
        return format_word(self.symbols) or "1"


_SYMBOL = re.compile(r"\s*([ds])_?\{?(\d+)\}?\s*")


def parse_word(text: str) -> tuple:
    """Parse ``"d2 d1 s0"`` / ``"d_2 s_0"`` into a raw symbol tuple."""
    text = text.replace("∂", "d")
    out = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _SYMBOL.match(text, pos)
        if not m:
            raise ValueError(f"malformed operator word near {text[pos:]!r}")
        out.append((m.group(1), int(m.group(2))))
        pos = m.end()
    return tuple(out)


def format_word(symbols: Iterable) -> str:
    return " ".join(f"{k}{i}" for k, i in symbols)


def _check_symbols(raw: Iterable) -> list:
    word = []
    for sym in raw:
        kind, idx = sym
        if kind not in ("d", "s"):
            raise ValueError(f"unknown operator symbol {kind!r}")
        if not isinstance(idx, int) or idx < 0:
            raise ValueError(f"operator index must be a non-negative int, got {idx!r}")
        word.append((kind, idx))
    return word


def _rewrite_once(word: list) -> tuple:
    """Rewrite the leftmost out-of-order adjacent pair; return (word, cancelled)."""
    for pos in range(len(word) - 1):
        (ka, a), (kb, b) = word[pos], word[pos + 1]
        if ka == "d" and kb == "d" and a >= b:
            return word[:pos] + [("d", b), ("d", a + 1)] + word[pos + 2:], False
        if ka == "s" and kb == "s" and a <= b:
            return word[:pos] + [("s", b + 1), ("s", a)] + word[pos + 2:], False
        if ka == "d" and kb == "s":
            i, j = a, b
            if i < j:
                repl = [("s", j - 1), ("d", i)]
            elif i > j + 1:
                repl = [("s", j), ("d", i - 1)]
            else:
                return word[:pos] + word[pos + 2:], True
            return word[:pos] + repl + word[pos + 2:], False
    return word, None


def normalize_word(raw) -> OperatorWord:
    """Normal form of a raw word under the simplicial identities."""
    if isinstance(raw, OperatorWord):
        raw = raw.symbols
    elif isinstance(raw, str):
        raw = parse_word(raw)
    word = _check_symbols(raw)
    cancellations = 0
    while True:
        word, cancelled = _rewrite_once(word)
        if cancelled is None:
            break
        cancellations += int(cancelled)
    degs = tuple(j for k, j in word if k == "s")
    faces = tuple(i for k, i in word if k == "d")
    return OperatorWord(degs, faces, cancellations)


def apply_word(word, x: Sequence[int]) -> Simplex:
    """Apply a word (raw symbols, string, or :class:`OperatorWord`) to ``x``."""
    if isinstance(word, OperatorWord):
        symbols = word.symbols
    elif isinstance(word, str):
        symbols = parse_word(word)
    else:
        symbols = _check_symbols(word)
    y = Simplex(x)
    for kind, idx in reversed(symbols):
        y = y.face(idx) if kind == "d" else y.degeneracy(idx)
    return y


# ---------------------------------------------------------------------------
# complexes


class ComplexFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SimplicialComplex:
    """Finite ordered simplicial complex, viewed as a simplicial set."""

    name: str
    maximal_simplices: tuple

    def __post_init__(self):
        seen = set()
        for s in self.maximal_simplices:
            if any(not isinstance(v, int) or v < 0 for v in s):
                raise ComplexFormatError(f"vertex ids must be non-negative ints: {s}")
            if any(a >= b for a, b in zip(s, s[1:])):
                raise ComplexFormatError(f"simplex {list(s)} is not strictly increasing")
            if s in seen:
                raise ComplexFormatError(f"duplicate maximal simplex {list(s)}")
            seen.add(s)
        faces = {}
        for s in self.maximal_simplices:
            for q in range(len(s)):
                for sub in itertools.combinations(s, q + 1):
                    faces.setdefault(q, set()).add(Simplex(sub))
        object.__setattr__(self, "_faces", {q: sorted(v) for q, v in faces.items()})

    @classmethod
    def from_simplices(cls, name: str, simplices: Iterable[Iterable[int]]) -> "SimplicialComplex":
        return cls(name, tuple(tuple(s) for s in simplices))

    @property
    def dim(self) -> int:
        return max(self._faces, default=-1)

    @property
    def vertices(self) -> list:
        return [s[0] for s in self._faces.get(0, [])]

    def nondegenerate(self, q: int) -> list:
        """Sorted list of nondegenerate ``q``-simplices."""
        return list(self._faces.get(q, []))

    def simplices(self, q: int) -> Iterator[Simplex]:
        """All ``q``-simplices, degenerate ones included."""
        for k in range(min(q, self.dim) + 1):
            for base in self._faces.get(k, []):
                # choose how many extra copies each vertex gets
                for extra in itertools.combinations_with_replacement(range(k + 1), q - k):
                    counts = [1] * (k + 1)
                    for e in extra:
                        counts[e] += 1
                    yield Simplex(v for v, c in zip(base, counts) for _ in range(c))

    def __contains__(self, x) -> bool:
        verts = tuple(sorted(set(x)))
        return Simplex(verts) in set(self._faces.get(len(verts) - 1, []))

    def f_vector(self) -> list:
        return [len(self._faces[q]) for q in range(self.dim + 1)]

    def to_json(self) -> dict:
        return {"name": self.name, "maximal_simplices": [list(s) for s in self.maximal_simplices]}


def load_complex(source) -> SimplicialComplex:
    """Load a complex from a JSON path, JSON text, or an already-parsed dict."""
    if isinstance(source, dict):
        data = source
    else:
        text = Path(source).read_text() if not str(source).lstrip().startswith("{") else str(source)
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ComplexFormatError(f"invalid JSON: {exc}") from exc
    if not isinstance(data, dict) or "maximal_simplices" not in data:
        raise ComplexFormatError("expected an object with 'maximal_simplices'")
    name = data.get("name", "K")
    if not isinstance(name, str):
        raise ComplexFormatError("'name' must be a string")
    sims = data["maximal_simplices"]
    if not isinstance(sims, list) or not all(isinstance(s, list) and s for s in sims):
        raise ComplexFormatError("'maximal_simplices' must be a list of non-empty lists")
    return SimplicialComplex(name, tuple(tuple(s) for s in sims))


_DATA = Path(__file__).with_name("data")


def bundled(name: str) -> SimplicialComplex:
    """One of the shipped test complexes: circle, sphere, s3, rp2, torus."""
    return load_complex(_DATA / f"{name}.json")


BUNDLED = ("circle", "sphere", "s3", "rp2", "torus")
