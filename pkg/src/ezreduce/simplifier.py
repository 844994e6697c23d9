"""Face-interval formulas for compositions of EZ operators.

A partition of an ``m``-simplex into ``N`` consecutive intervals is a
sequence ``0 = i_0 <= i_1 <= ... <= i_N = m``; slot ``j`` is the face that
keeps vertices ``i_{j-1} .. i_j`` and has length ``|j| = i_j - i_{j-1}``.
A factor composed of several slots keeps the concatenation of their vertex
ranges, so two slots meeting at a vertex give a degenerate factor.

An :class:`IntervalTerm` of degree ``r`` has ``n`` tensor factors and
``n + r`` slots; its sign is a polynomial over GF(2) in the lengths.
:func:`simplify_step` turns ``h`` into ``h . ESA_(n,l)`` without ever
expanding shuffles, and :func:`generate_dnr` chains these steps into a
face-only formula for the higher diagonal ``D^n_r``.
"""

from __future__ import annotations

import itertools
import json
import threading
from dataclasses import dataclass, field, replace
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .chains import FormalSum, ProductSimplex, TensorTerm
from .ez import twist_powers
from .simplicial import Simplex


class DegenerateInputError(ValueError):
    """``simplify_step`` was handed a term whose composition is entirely degenerate."""


# ---------------------------------------------------------------------------
# sign polynomials


@dataclass(frozen=True)
class SignExpression:
    """Exponent of ``-1`` as a GF(2) polynomial in interval lengths.

    ``monomials`` is a frozenset of frozensets of slot numbers; the empty
    monomial is the constant 1.  Lengths enter only through their parity,
    so ``|j|^2 = |j|`` and the representation is canonical.
    """

    monomials: frozenset = frozenset()

    @staticmethod
    def const(bit: int) -> "SignExpression":
        return SignExpression(frozenset({frozenset()}) if bit & 1 else frozenset())

    @staticmethod
    def length(j: int) -> "SignExpression":
        return SignExpression(frozenset({frozenset({j})}))

    @staticmethod
    def lengths(slots: Iterable[int], const: int = 0) -> "SignExpression":
        """``|a| + |b| + ... + const``."""
        out = SignExpression.const(const)
        for j in slots:
            out = out + SignExpression.length(j)
        return out

    def __add__(self, other: "SignExpression") -> "SignExpression":
        return SignExpression(self.monomials ^ other.monomials)

    def __mul__(self, other: "SignExpression") -> "SignExpression":
        acc = set()
        for a in self.monomials:
            for b in other.monomials:
                acc ^= {a | b}
        return SignExpression(frozenset(acc))

    def substitute(self, mapping: Mapping[int, "SignExpression"]) -> "SignExpression":
        """Replace every ``|j|`` by ``mapping[j]`` simultaneously (missing keys stay)."""
        out = SignExpression()
        for mono in self.monomials:
            term = SignExpression.const(1)
            for j in sorted(mono):
                term = term * mapping.get(j, SignExpression.length(j))
            out = out + term
        return out

    def evaluate(self, lengths: Sequence[int]) -> int:
        """Parity of the exponent; ``lengths[j - 1]`` is ``|j|``."""
        bit = 0
        for mono in self.monomials:
            if all(lengths[j - 1] & 1 for j in mono):
                bit ^= 1
        return bit

    @property
    def variables(self) -> set:
        return set().union(*self.monomials) if self.monomials else set()

    def sorted_monomials(self) -> list:
        return sorted((tuple(sorted(m)) for m in self.monomials), key=lambda m: (len(m), m))

    def __str__(self) -> str:
        if not self.monomials:
            return "0"
        parts = []
        for mono in self.sorted_monomials():
            parts.append("1" if not mono else "".join(f"|{j}|" for j in mono))
        return "+".join(parts)

    def to_json(self) -> list:
        return [list(m) for m in self.sorted_monomials()]

    @classmethod
    def from_json(cls, data) -> "SignExpression":
        return cls(frozenset(frozenset(m) for m in data))


# ---------------------------------------------------------------------------
# terms and formulas


@dataclass(frozen=True)
class IntervalTerm:
    """``(-1)^sign  d[..]x_{k_1} (x) ... (x) d[..]x_{k_n}`` summed over ``P(m, n + r)``.

    ``factors[t] = (k, slots)``: tensor position ``t`` reads input coordinate
    ``k`` (1-based) through the face-interval composition ``slots``.
    ``origin`` records the ``(k_i, l_i)`` sequence that produced the term.
    """

    n: int
    r: int
    factors: tuple
    sign: SignExpression = SignExpression()
    origin: tuple = field(default=(), compare=False)

    @property
    def slot_count(self) -> int:
        return self.n + self.r

    def factor_of(self, coord: int) -> int:
        for t, (k, _) in enumerate(self.factors):
            if k == coord:
                return t
        raise KeyError(coord)

    def slots_before(self, coord: int) -> tuple:
        return self.factors[self.factor_of(coord)][1]

    def check_shape(self) -> None:
        """Every slot used once; slots inside a factor increasing and non-consecutive."""
        used = sorted(j for _, slots in self.factors for j in slots)
        if used != list(range(1, self.slot_count + 1)):
            raise ValueError(f"slots {used} do not cover 1..{self.slot_count} exactly once")
        if sorted(k for k, _ in self.factors) != list(range(1, self.n + 1)):
            raise ValueError("factor coordinates are not a permutation")
        for _, slots in self.factors:
            if any(b - a < 2 for a, b in zip(slots, slots[1:])):
                raise ValueError(f"factor slots {slots} are not increasing and non-consecutive")

    def sort_key(self) -> tuple:
        return (tuple(k for k, _ in self.factors), tuple(s for _, s in self.factors),
                self.sign.sorted_monomials())

    def to_text(self) -> str:
        body = " ⊗ ".join("".join(f"∂[{j}]" for j in slots) + f" x_{{{k}}}" for k, slots in self.factors)
        return f"(-1)^{{{self.sign}}} {body}"

    def to_json(self) -> dict:
        return {
            "factors": [{"x": k, "slots": list(slots)} for k, slots in self.factors],
            "sign": self.sign.to_json(),
            "origin": [list(o) for o in self.origin],
        }

    @classmethod
    def from_json(cls, n: int, r: int, data: dict) -> "IntervalTerm":
        factors = tuple((f["x"], tuple(f["slots"])) for f in data["factors"])
        return cls(n, r, factors, SignExpression.from_json(data["sign"]),
                   tuple(tuple(o) for o in data.get("origin", ())))


@dataclass(frozen=True)
class IntervalFormula:
    """A sum of :class:`IntervalTerm` of common ``(n, r)``; ``diagonal`` marks a precomposed ``Delta``."""

    n: int
    r: int
    terms: tuple
    diagonal: bool = False

    def canonical(self) -> "IntervalFormula":
        return replace(self, terms=tuple(sorted(self.terms, key=IntervalTerm.sort_key)))

    def to_text(self) -> str:
        head = f"D^{self.n}_{self.r}" if self.diagonal else f"h^{self.n}_{self.r}"
        lines = [f"# {head}: {len(self.terms)} terms over P(m, {self.n + self.r})"]
        lines += [t.to_text() for t in self.canonical().terms]
        return "\n".join(lines) + "\n"

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "r": self.r,
            "diagonal": self.diagonal,
            "terms": [t.to_json() for t in self.canonical().terms],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1, ensure_ascii=False)

    @classmethod
    def from_json(cls, data) -> "IntervalFormula":
        if isinstance(data, str):
            data = json.loads(data)
        n, r = data["n"], data["r"]
        terms = tuple(IntervalTerm.from_json(n, r, t) for t in data["terms"])
        return cls(n, r, terms, data.get("diagonal", False))


# ---------------------------------------------------------------------------
# the simplification algorithm


def seed_awn(n: int) -> IntervalFormula:
    """``AW_(n)`` as a single face-interval term: factor ``j`` is ``d[j] x_j``."""
    if n < 2:
        raise ValueError("n must be at least 2")
    term = IntervalTerm(n, 0, tuple((j, (j,)) for j in range(1, n + 1)))
    return IntervalFormula(n, 0, (term,))


def twist(h: IntervalTerm, k: int) -> IntervalTerm:
    """``h . t^k``: a factor reading coordinate ``c`` now reads ``c + k`` (mod ``n``)."""
    n = h.n
    factors = tuple(((c - 1 + k) % n + 1, slots) for c, slots in h.factors)
    return replace(h, factors=factors)


def _degeneracy_reason(h: IntervalTerm, ell: int):
    n = h.n
    if not 0 <= ell <= n - 2:
        raise ValueError(f"ESA level {ell} out of range for n = {n}")
    for c, slots in h.factors:
        if not slots:
            return f"x_{c} has no face-interval"
    for u in range(1, ell + 1):
        if len(h.slots_before(n + 1 - u)) > 1:
            return f"x_{n + 1 - u} has more than one face-interval"
    last = h.slots_before(n - ell)[-1]
    top = max(j for c in range(1, n - ell + 1) for j in h.slots_before(c))
    if last == top:
        return f"the interval before x_{n - ell} is the largest of the left block"
    for u in range(1, ell + 1):
        j = h.slots_before(n + 1 - u)[0]
        for _, slots in h.factors:
            for a, b in zip(slots, slots[1:]):
                if a == j - 1 and b == j + 1:
                    return f"d[{j - 1}]d[{j + 1}] surrounds the interval of x_{n + 1 - u}"
    return None


def is_all_degenerate(h: IntervalTerm, ell: int) -> bool:
    """True if every summand of ``h . ESA_(n,l)`` is degenerate."""
    return _degeneracy_reason(h, ell) is not None


def _shift_map(pairs) -> dict:
    return {old: new for old, new in pairs}


def simplify_step(h: IntervalTerm, ell: int, v_rule: str = "derived",
                  step1_rule: str = "derived") -> IntervalTerm:
    """Normalized face-only expression of ``h . ESA_(n,l)`` (degree ``r + 1``).

    ``v_rule`` selects how Step 2 rewrites the length of the interval just
    before ``x_{n-l}``: ``"derived"`` uses ``|v| -> |v| + |N-l+1| + 1``,
    ``"short"`` drops the leading ``|v|``.  ``step1_rule="short"``
    likewise omits the shift of the previously peeled interval in Step 1.
    Both short variants are kept only for diagnostics; they disagree with the brute-force composition.
    """
    reason = _degeneracy_reason(h, ell)
    if reason:
        raise DegenerateInputError(reason)
    n, r = h.n, h.r
    N = n + r
    L = SignExpression.length
    lengths = SignExpression.lengths
    one = SignExpression.const(1)

    peeled = [h.slots_before(n + 1 - u)[0] for u in range(1, ell + 1)]  # j_1 .. j_l
    pos = {j: j for j in range(1, N + 1)}
    sign = h.sign

    # Step 1: peel x_n, x_{n-1}, ... one AW/EML pair at a time
    for u, j in enumerate(peeled, start=1):
        cur, top = pos[j], N - u + 1
        mapping = {cur: L(top) + one}
        mapping.update((i, L(i - 1)) for i in range(cur + 1, top + 1))
        if top < N and step1_rule == "derived":
            # the cut point closing the active range moves down by one, so the
            # interval peeled in the previous stage grows by one
            mapping[top + 1] = L(top + 1) + one
        sign = sign.substitute(mapping)
        sign = sign + (L(top) + one) * lengths(range(cur, top))
        for s, p in pos.items():
            if cur < p <= top:
                pos[s] = p - 1
        pos[j] = top

    # Step 2: the SHI stage on (x_1 .. x_{n-l-1}, x_{n-l})
    v = pos[h.slots_before(n - ell)[-1]]
    split = N - ell + 1
    mapping = {i: L(i + 1) for i in range(split + 1, N + 1)}
    mapping[split] = L(split + 1) + one
    mapping[v] = L(split) + one + (L(v) if v_rule == "derived" else SignExpression())
    sign = sign.substitute(mapping)
    sign = sign + lengths(range(1, v + 1)) + lengths(range(v + 1, split)) * L(split)

    # slot relabelling
    final = {}
    for s, p in pos.items():
        final[s] = p if p < split else p + 1
    factors = []
    for c, slots in h.factors:
        new = tuple(final[j] for j in slots)
        if c == n - ell:
            new = new + (split,)
        factors.append((c, new))
    out = IntervalTerm(n, r + 1, tuple(factors), sign, h.origin)
    return out


def _sequence_space(n: int, r: int, parity: str):
    """Candidate ``(k_i, l_i)`` per step, outermost (``i = r``) first."""
    return [[(k, ell) for k in twist_powers(n, r, i, parity) for ell in range(n - 1)]
            for i in range(r, 0, -1)]


def pruning_ok(n: int, seq: Sequence) -> bool:
    """Cheap necessary conditions on a sequence ``((k_1, l_1), ..., (k_r, l_r))``.

    ``k_i + l_i < n`` always; when ``k_i < l_{i+1}`` also ``k_i + l_i <= l_{i+1}``.
    """
    for i, (k, ell) in enumerate(seq):
        if k + ell >= n:
            return False
        if i + 1 < len(seq):
            nxt = seq[i + 1][1]
            if k < nxt and not k + ell <= nxt:
                return False
    return True


_FORMULA_CACHE: dict = {}
_FORMULA_LOCK = threading.Lock()


def generate_dnr(n: int, r: int, parity: str = "gamma", prune: bool = False,
                 v_rule: str = "derived") -> IntervalFormula:
    """Face-only formula for ``D^n_r = AW_(n) gamma_r SHI_(n) ... gamma_1 SHI_(n) Delta``.

    Sequences are expanded outermost first: twist by ``t^{k_r}``, simplify
    against ``ESA_(n,l_r)``, and so on down to ``i = 1``.  Branches whose
    composition is entirely degenerate are dropped as soon as they are
    detected.  With ``prune`` the sequence-level pruning conditions are
    applied up front as well.
    """
    if n < 2 or r < 0:
        raise ValueError("need n >= 2 and r >= 0")
    key = (n, r, parity, prune, v_rule)
    with _FORMULA_LOCK:
        if key not in _FORMULA_CACHE:
            _FORMULA_CACHE[key] = _generate(n, r, parity, prune, v_rule)
        return _FORMULA_CACHE[key]


def _generate(n: int, r: int, parity: str, prune: bool, v_rule: str) -> IntervalFormula:
    space = _sequence_space(n, r, parity)
    seed = seed_awn(n).terms[0]
    terms = []

    def walk(h: IntervalTerm, depth: int, chosen: tuple):
        if depth == r:
            seq = tuple(reversed(chosen))
            if prune and not pruning_ok(n, seq):
                return
            terms.append(replace(h, origin=seq))
            return
        for k, ell in space[depth]:
            t = twist(h, k)
            if is_all_degenerate(t, ell):
                continue
            walk(simplify_step(t, ell, v_rule), depth + 1, chosen + ((k, ell),))

    walk(seed, 0, ())
    return IntervalFormula(n, r, tuple(terms), diagonal=True).canonical()


# ---------------------------------------------------------------------------
# evaluation


@lru_cache(maxsize=None)
def partitions(m: int, parts: int) -> tuple:
    """All ``(i_0, ..., i_parts)`` with ``0 = i_0 <= ... <= i_parts = m``."""
    out = []
    for cuts in itertools.combinations_with_replacement(range(m + 1), parts - 1):
        out.append((0,) + cuts + (m,))
    return tuple(out)


@lru_cache(maxsize=None)
def _instantiate(factors: tuple, m: int, slots: int) -> tuple:
    """Per partition: (lengths, per-factor vertex positions)."""
    out = []
    for cut in partitions(m, slots):
        lengths = tuple(cut[j] - cut[j - 1] for j in range(1, slots + 1))
        pos = []
        for _, ss in factors:
            pp = []
            for j in ss:
                pp.extend(range(cut[j - 1], cut[j] + 1))
            pos.append(tuple(pp))
        out.append((lengths, tuple(pos)))
    return tuple(out)


def factor_degrees(term: IntervalTerm, lengths: Sequence[int]) -> tuple:
    """Dimension of each factor for a concrete partition (before degeneracy checks)."""
    return tuple(sum(lengths[j - 1] + 1 for j in slots) - 1 for _, slots in term.factors)


def evaluate_term(term: IntervalTerm, x, p: int, coeff: int = 1, out: FormalSum | None = None,
                  degrees: tuple | None = None) -> FormalSum:
    """Evaluate one term on a simplex (diagonal input) or a product simplex.

    With ``degrees`` only summands whose factors have exactly those
    dimensions are produced.
    """
    out = FormalSum(p) if out is None else out
    coords = x if isinstance(x, ProductSimplex) else None
    m = x.dim
    if coords is not None and len(coords) != term.n:
        raise ValueError("product simplex has the wrong number of coordinates")
    for lengths, pos in _instantiate(term.factors, m, term.slot_count):
        if degrees is not None and tuple(len(pp) - 1 for pp in pos) != degrees:
            continue
        factors = []
        for (k, _), pp in zip(term.factors, pos):
            src = coords[k - 1] if coords is not None else x
            f = src.pick(pp)
            if f.is_degenerate():
                break
            factors.append(f)
        else:
            c = -coeff if term.sign.evaluate(lengths) else coeff
            out.add_term(TensorTerm(factors), c)
    return out


def evaluate_formula(F: IntervalFormula, x, p: int = 2, m: int | None = None,
                     degrees: tuple | None = None) -> FormalSum:
    """Sum of the formula's terms over all partitions, on a simplex or a chain."""
    if isinstance(x, FormalSum):
        out = FormalSum(x.p)
        for b, k in x.terms.items():
            _check_dim(b, m)
            for t in F.terms:
                evaluate_term(t, b, x.p, k, out, degrees)
        return out
    if not isinstance(x, ProductSimplex):
        x = Simplex(x)
    _check_dim(x, m)
    out = FormalSum(p)
    for t in F.terms:
        evaluate_term(t, x, p, 1, out, degrees)
    return out


def _check_dim(x, m):
    if m is not None and x.dim != m:
        raise ValueError(f"expected a {m}-dimensional input, got dimension {x.dim}")


def count_face_operators(F: IntervalFormula, m: int) -> int:
    """Face operators over every instantiated summand of ``F`` at dimension ``m``."""
    total = 0
    for t in F.terms:
        for _, pos in _instantiate(t.factors, m, t.slot_count):
            total += sum(m + 1 - len(set(pp)) for pp in pos)
    return total


def count_summands(F: IntervalFormula, m: int) -> int:
    return sum(len(partitions(m, t.slot_count)) for t in F.terms)
