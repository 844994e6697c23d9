"""Normalized chains with Z_p coefficients, tensor products and contractions.

Basis objects are hashable values exposing ``is_degenerate()`` and a
``degree`` (or ``dim``).  A :class:`FormalSum` silently drops degenerate
basis elements on insertion, so every sum lives in a normalized complex.

The tensor differential uses the Koszul rule
``d(a (x) b) = da (x) b + (-1)^|a| a (x) db``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterable, Iterator, Optional

from .simplicial import Simplex, SimplicialComplex


def degree_of(b) -> int:
    deg = getattr(b, "degree", None)
    return b.dim if deg is None else deg


def check_prime(p: int) -> int:
    if not isinstance(p, int) or p < 2 or any(p % k == 0 for k in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"coefficient modulus must be a prime, got {p!r}")
    return p


class FormalSum:
    """Finite Z_p-linear combination of basis objects."""

    __slots__ = ("p", "terms")

    def __init__(self, p: int, terms=None):
        self.p = p
        self.terms: dict = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for b, c in items:
                self.add_term(b, c)

    @classmethod
    def basis(cls, b, p: int, coeff: int = 1) -> "FormalSum":
        return cls(p, [(b, coeff)])

    def add_term(self, b, c: int) -> None:
        c %= self.p
        if not c or b.is_degenerate():
            return
        new = (self.terms.get(b, 0) + c) % self.p
        if new:
            self.terms[b] = new
        else:
            self.terms.pop(b, None)

    def iadd(self, other: "FormalSum", scale: int = 1) -> "FormalSum":
        """In-place ``self += scale * other`` (other is already normalized)."""
        p = self.p
        terms = self.terms
        for b, c in other.terms.items():
            new = (terms.get(b, 0) + scale * c) % p
            if new:
                terms[b] = new
            else:
                terms.pop(b, None)
        return self

    def copy(self) -> "FormalSum":
        out = FormalSum(self.p)
        out.terms = dict(self.terms)
        return out

    def __add__(self, other: "FormalSum") -> "FormalSum":
        return self.copy().iadd(other)

    def __sub__(self, other: "FormalSum") -> "FormalSum":
        return self.copy().iadd(other, -1)

    def __neg__(self) -> "FormalSum":
        return self.scale(-1)

    def scale(self, k: int) -> "FormalSum":
        out = FormalSum(self.p)
        if k % self.p:
            out.terms = {b: (c * k) % self.p for b, c in self.terms.items()}
        return out

    __rmul__ = scale

    def __iter__(self) -> Iterator:
        return iter(self.terms.items())

    def __len__(self) -> int:
        return len(self.terms)

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __eq__(self, other) -> bool:
        if isinstance(other, int) and other == 0:
            return not self.terms
        if not isinstance(other, FormalSum):
            return NotImplemented
        return self.p == other.p and self.terms == other.terms

    def __hash__(self):
        return hash((self.p, frozenset(self.terms.items())))

    def coefficient(self, b) -> int:
        return self.terms.get(b, 0)

    def map(self, fn: Callable[[Hashable], "FormalSum"]) -> "FormalSum":
        """Extend ``fn`` (basis -> FormalSum) linearly."""
        out = FormalSum(self.p)
        for b, c in self.terms.items():
            out.iadd(fn(b), c)
        return out

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(), key=lambda bc: repr(bc[0]))

    def __repr__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for b, c in self.sorted_terms():
            c = c if c <= self.p // 2 else c - self.p
            parts.append(("" if c == 1 else "-" if c == -1 else f"{c}*") + repr(b))
        return " + ".join(parts).replace("+ -", "- ")


def linear(fn: Callable) -> Callable[[FormalSum], FormalSum]:
    """Turn a basis map into a map on formal sums."""

    def apply(c: FormalSum) -> FormalSum:
        return c.map(fn)

    apply.basis_map = fn
    return apply


# ---------------------------------------------------------------------------
# basis objects for products and tensors


class ProductSimplex(tuple):
    """A simplex of a cartesian product ``K_1 x ... x K_n``.

    Coordinates may themselves be product simplices.  Degenerate iff every
    coordinate is degenerate along a common ``s_i``.
    """

    __slots__ = ()

    @property
    def dim(self) -> int:
        return self[0].dim

    degree = dim

    def face(self, i: int) -> "ProductSimplex":
        return ProductSimplex(x.face(i) for x in self)

    def degeneracy(self, i: int) -> "ProductSimplex":
        return ProductSimplex(x.degeneracy(i) for x in self)

    def pick(self, positions) -> "ProductSimplex":
        positions = tuple(positions)
        return ProductSimplex(x.pick(positions) for x in self)

    def degenerate_indices(self) -> frozenset:
        common = self[0].degenerate_indices()
        for x in self[1:]:
            if not common:
                break
            common = common & x.degenerate_indices()
        return common

    def is_degenerate(self) -> bool:
        return bool(self.degenerate_indices())

    def __repr__(self) -> str:
        return "(" + ", ".join(map(repr, self)) + ")"


class TensorTerm(tuple):
    """``x_1 (x) ... (x) x_n``; zero in the normalized complex if any factor is degenerate."""

    __slots__ = ()

    @property
    def degree(self) -> int:
        return sum(degree_of(x) for x in self)

    @property
    def degrees(self) -> tuple:
        return tuple(degree_of(x) for x in self)

    def is_degenerate(self) -> bool:
        return any(x.is_degenerate() for x in self)

    def __repr__(self) -> str:
        return " ⊗ ".join(map(repr, self))


def tensor(*sums: FormalSum) -> FormalSum:
    """Tensor product of formal sums; nested :class:`TensorTerm` factors are kept."""
    p = sums[0].p
    acc = {(): 1}
    for s in sums:
        nxt = {}
        for prefix, c in acc.items():
            for b, k in s.terms.items():
                key = prefix + (b,)
                nxt[key] = (nxt.get(key, 0) + c * k) % p
        acc = nxt
    return FormalSum(p, ((TensorTerm(k), c) for k, c in acc.items()))


def flatten_tensor(t: TensorTerm) -> TensorTerm:
    out = []
    for x in t:
        out.extend(flatten_tensor(x) if isinstance(x, TensorTerm) else (x,))
    return TensorTerm(out)


# ---------------------------------------------------------------------------
# differentials


def simplex_differential(x, p: int) -> FormalSum:
    """``d = sum (-1)^i d_i`` on a simplex or product simplex."""
    out = FormalSum(p)
    if x.dim == 0:
        return out
    for i in range(x.dim + 1):
        out.add_term(x.face(i), -1 if i & 1 else 1)
    return out


def differential(c: FormalSum) -> FormalSum:
    """Differential of a chain of simplices or product simplices."""
    p = c.p
    return c.map(lambda x: simplex_differential(x, p))


def basis_differential(b, p: int) -> FormalSum:
    """Differential of any supported basis object (tensors via Koszul)."""
    if isinstance(b, TensorTerm):
        return tensor_basis_differential(b, p)
    if hasattr(b, "differential"):
        return b.differential(p)
    return simplex_differential(b, p)


def tensor_basis_differential(t: TensorTerm, p: int) -> FormalSum:
    out = FormalSum(p)
    sign = 1
    for pos, x in enumerate(t):
        dx = basis_differential(x, p)
        for y, c in dx.terms.items():
            out.add_term(TensorTerm(t[:pos] + (y,) + t[pos + 1:]), sign * c)
        if degree_of(x) & 1:
            sign = -sign
    return out


def tensor_differential(c: FormalSum) -> FormalSum:
    p = c.p
    return c.map(lambda t: tensor_basis_differential(t, p))


def chain_differential(c: FormalSum) -> FormalSum:
    p = c.p
    return c.map(lambda b: basis_differential(b, p))


# ---------------------------------------------------------------------------
# cochains


@dataclass
class Cochain:
    """A ``degree``-cochain: finitely supported values on nondegenerate simplices."""

    degree: int
    values: dict
    p: int

    def __post_init__(self):
        self.values = {Simplex(k): v % self.p for k, v in self.values.items() if v % self.p}

    def __call__(self, c) -> int:
        if isinstance(c, FormalSum):
            return sum(k * self.values.get(b, 0) for b, k in c.terms.items()) % self.p
        return self.values.get(Simplex(c), 0)

    def __add__(self, other: "Cochain") -> "Cochain":
        vals = dict(self.values)
        for k, v in other.values.items():
            vals[k] = vals.get(k, 0) + v
        return Cochain(self.degree, vals, self.p)

    def scale(self, k: int) -> "Cochain":
        return Cochain(self.degree, {s: v * k for s, v in self.values.items()}, self.p)

    def __eq__(self, other) -> bool:
        return (isinstance(other, Cochain) and self.degree == other.degree
                and self.p == other.p and self.values == other.values)

    def is_zero(self) -> bool:
        return not self.values

    @classmethod
    def zero(cls, degree: int, p: int) -> "Cochain":
        return cls(degree, {}, p)

    @classmethod
    def indicator(cls, simplex, p: int, value: int = 1) -> "Cochain":
        s = Simplex(simplex)
        return cls(s.dim, {s: value}, p)


def coboundary(c: Cochain, K: SimplicialComplex) -> Cochain:
    """``(delta c)(x) = c(d x)`` on every ``(q+1)``-simplex of ``K``."""
    vals = {}
    for x in K.nondegenerate(c.degree + 1):
        v = c(simplex_differential(x, c.p))
        if v:
            vals[x] = v
    return Cochain(c.degree + 1, vals, c.p)


def evaluate_tensor_cochain(cochains, chain: FormalSum) -> int:
    """``mu (c_1 (x) ... (x) c_n)`` on a chain of tensor terms.

    Factor degrees must match the cochain degrees; no Koszul sign is
    introduced, so the binary case reproduces the classical cup product.
    """
    degs = tuple(c.degree for c in cochains)
    p = chain.p
    total = 0
    for t, k in chain.terms.items():
        if t.degrees != degs:
            continue
        v = k
        for c, x in zip(cochains, t):
            v = v * c.values.get(x, 0) % p
            if not v:
                break
        total += v
    return total % p


# ---------------------------------------------------------------------------
# chain complexes and contractions


@dataclass(frozen=True, eq=False)
class ChainComplex:
    """A finitely generated chain complex presented by a basis and a differential.

    ``all_fn`` is set for chains of simplicial sets: it lists every
    ``q``-simplex including degenerate ones, which products need.
    """

    name: str
    basis_fn: Callable[[int], Iterable] = field(repr=False)
    d_fn: Callable[[Hashable, int], FormalSum] = field(repr=False, default=basis_differential)
    all_fn: Optional[Callable[[int], Iterable]] = field(repr=False, default=None)

    def basis(self, q: int) -> list:
        return [b for b in self.basis_fn(q) if not b.is_degenerate()]

    def d(self, c: FormalSum) -> FormalSum:
        p = c.p
        return c.map(lambda b: self.d_fn(b, p))


def simplicial_chains(K: SimplicialComplex) -> ChainComplex:
    return ChainComplex(f"C({K.name})", K.nondegenerate, all_fn=K.simplices)


def product_chains(*Cs: ChainComplex) -> ChainComplex:
    """``C(K_1 x ... x K_n)`` with flat coordinates.

    Pass a single product complex as a factor to nest, e.g.
    ``product_chains(product_chains(C, C), C)`` has basis ``((x, y), z)``.
    """
    if any(C.all_fn is None for C in Cs):
        raise ValueError("product factors must be simplicial chain complexes")

    def all_simplices(q):
        pools = [list(C.all_fn(q)) for C in Cs]
        for combo in itertools.product(*pools):
            yield ProductSimplex(combo)

    name = " x ".join(C.name[2:-1] if C.name.startswith("C(") else C.name for C in Cs)
    return ChainComplex(f"C({name})", all_simplices, all_fn=all_simplices)


def tensor_chains(*Cs: ChainComplex) -> ChainComplex:
    def basis(q):
        yield from _tensor_basis(Cs, q)

    return ChainComplex(" ⊗ ".join(C.name for C in Cs), basis)


def _tensor_basis(Cs, q):
    if len(Cs) == 1:
        for b in Cs[0].basis(q):
            yield (b,)
        return
    for a in range(q + 1):
        heads = Cs[0].basis(a)
        if not heads:
            continue
        tails = list(_tensor_basis(Cs[1:], q - a))
        for h in heads:
            for t in tails:
                yield TensorTerm((h,) + tuple(t))


class ContractionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Contraction:
    """``(f, g, phi)`` with ``f: C -> C'``, ``g: C' -> C`` and ``phi`` of degree +1 on ``C``."""

    source: ChainComplex
    target: ChainComplex
    f: Callable[[FormalSum], FormalSum]
    g: Callable[[FormalSum], FormalSum]
    phi: Callable[[FormalSum], FormalSum]


def identity_contraction(C: ChainComplex) -> Contraction:
    ident = lambda c: c.copy()
    return Contraction(C, C, ident, ident, lambda c: FormalSum(c.p))


def compose_contractions(r: Contraction, r2: Contraction) -> Contraction:
    """``r2 . r = (f2 f, g g2, phi + g phi2 f)`` for ``r: C => C'`` and ``r2: C' => C''``."""
    if r.target is not r2.source:
        raise ContractionError(f"cannot compose: {r.target.name} is not {r2.source.name}")
    return Contraction(
        r.source,
        r2.target,
        lambda c: r2.f(r.f(c)),
        lambda c: r.g(r2.g(c)),
        lambda c: r.phi(c) + r.g(r2.phi(r.f(c))),
    )


def _split_pairs(fn_left, fn_right, sign_by_left_degree: bool):
    """Basis map ``a (x) b -> fn_left(a) (x) fn_right(b)`` with optional Koszul sign."""

    def on_sum(c: FormalSum) -> FormalSum:
        p = c.p
        out = FormalSum(p)
        for t, k in c.terms.items():
            a, b = t
            left = fn_left(FormalSum.basis(a, p))
            if not left:
                continue
            right = fn_right(FormalSum.basis(b, p))
            if not right:
                continue
            if sign_by_left_degree and degree_of(a) & 1:
                k = -k
            out.iadd(tensor(left, right), k)
        return out

    return on_sum


def tensor_contractions(r: Contraction, r2: Contraction) -> Contraction:
    """``r (x) r2 = (f (x) f2, g (x) g2, phi (x) g2 f2 + 1 (x) phi2)``.

    Basis elements of the tensor complexes are binary :class:`TensorTerm`
    pairs.  ``1 (x) phi2`` carries the Koszul sign ``(-1)^|a|``.
    """
    src = tensor_chains(r.source, r2.source)
    tgt = tensor_chains(r.target, r2.target)
    g2f2 = lambda c: r2.g(r2.f(c))
    ident = lambda c: c
    first = _split_pairs(r.phi, g2f2, False)
    second = _split_pairs(ident, r2.phi, True)
    return Contraction(
        src,
        tgt,
        _split_pairs(r.f, r2.f, False),
        _split_pairs(r.g, r2.g, False),
        lambda c: first(c) + second(c),
    )


@dataclass
class AxiomReport:
    checked: int = 0
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def fail(self, axiom: str, b, value) -> None:
        if len(self.failures) < 20:
            self.failures.append((axiom, b, value))


def check_contraction(r: Contraction, p: int, max_dim: int, fg_identity: bool = True,
                      chain_maps: bool = True) -> AxiomReport:
    """Check the contraction axioms on every basis element up to ``max_dim``."""
    rep = AxiomReport()
    for q in range(max_dim + 1):
        for b in r.source.basis(q):
            rep.checked += 1
            x = FormalSum.basis(b, p)
            fx = r.f(x)
            phix = r.phi(x)
            lhs = r.source.d(phix) + r.phi(r.source.d(x))
            rhs = x - r.g(fx)
            if lhs != rhs:
                rep.fail("d phi + phi d = 1 - g f", b, lhs - rhs)
            if r.f(phix):
                rep.fail("f phi = 0", b, r.f(phix))
            if r.phi(phix):
                rep.fail("phi phi = 0", b, r.phi(phix))
            if chain_maps and r.target.d(fx) != r.f(r.source.d(x)):
                rep.fail("d f = f d", b, None)
        if q > max_dim:
            continue
        for b in r.target.basis(q):
            rep.checked += 1
            y = FormalSum.basis(b, p)
            gy = r.g(y)
            if r.phi(gy):
                rep.fail("phi g = 0", b, r.phi(gy))
            if fg_identity and r.f(gy) != y:
                rep.fail("f g = 1", b, r.f(gy))
            if chain_maps and r.source.d(gy) != r.g(r.target.d(y)):
                rep.fail("d g = g d", b, None)
    return rep
