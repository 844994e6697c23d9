"""Chain-level Eilenberg-Zilber operators and their n-fold compositions.

Everything here is evaluated by brute force on vertex lists.  The module is
the reference against which the face-interval formulas are checked.

``shi`` is the homotopy of the contraction ``(AW, EML, SHI)`` with the
convention ``d SHI + SHI d = 1 - EML AW``.  The explicit shuffle formula
``S`` (sign ``mbar - 1 + sig``) satisfies ``d S + S d = EML AW - 1``, so
``shi`` returns ``-S``.  Higher diagonals are compositions of ``S`` itself,
hence the ``(-1)^r`` in :func:`naive_sequence` and :func:`naive_dnr`.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Iterable, Sequence

from .chains import (
    ChainComplex,
    Contraction,
    FormalSum,
    ProductSimplex,
    TensorTerm,
    degree_of,
    product_chains,
    tensor,
    tensor_chains,
)
from .simplicial import Simplex


@dataclass(frozen=True)
class Shuffle:
    alpha: tuple
    beta: tuple
    signature: int


@lru_cache(maxsize=None)
def enumerate_shuffles(p: int, q: int) -> tuple:
    """All ``(p, q)``-shuffles with signature ``sum_i alpha_i - (i - 1)``."""
    if p < 0 or q < 0:
        raise ValueError("shuffle sizes must be non-negative")
    out = []
    for alpha in itertools.combinations(range(p + q), p):
        aset = set(alpha)
        beta = tuple(j for j in range(p + q) if j not in aset)
        sig = sum(a - i for i, a in enumerate(alpha))
        out.append(Shuffle(alpha, beta, sig))
    return tuple(out)


def degenerate_positions(positions: Sequence[int], gamma: Iterable[int]) -> tuple:
    """Positions after applying ``s_gamma = s_{gamma_r} ... s_{gamma_1}`` (smallest first)."""
    pos = list(positions)
    for j in sorted(gamma):
        pos.insert(j, pos[j])
    return tuple(pos)


def _front(m: int, i: int) -> tuple:
    # d_{i+1} ... d_m
    return tuple(range(i + 1))


def _back(m: int, i: int) -> tuple:
    # d_0 ... d_{i-1}
    return tuple(range(i, m + 1))


# ---------------------------------------------------------------------------
# binary operators on pairs of simplicial objects


def aw_pair(x, y, p: int) -> FormalSum:
    m = x.dim
    out = FormalSum(p)
    for i in range(m + 1):
        out.add_term(TensorTerm((x.pick(_front(m, i)), y.pick(_back(m, i)))), 1)
    return out


def eml_pair(x, y, p: int) -> FormalSum:
    a, b = x.dim, y.dim
    out = FormalSum(p)
    for sh in enumerate_shuffles(a, b):
        xs = x.pick(degenerate_positions(range(a + 1), sh.beta))
        ys = y.pick(degenerate_positions(range(b + 1), sh.alpha))
        out.add_term(ProductSimplex((xs, ys)), -1 if sh.signature & 1 else 1)
    return out


@lru_cache(maxsize=None)
def shi_terms(m: int) -> tuple:
    """Position data ``(x_positions, y_positions, sign_exponent)`` of ``SHI`` in dimension ``m``."""
    terms = []
    for q in range(m):
        for p in range(m - q):
            mbar = m - p - q
            x_keep = tuple(range(m - q + 1))                       # d_{m-q+1} ... d_m
            y_keep = tuple(range(mbar)) + tuple(range(m - q, m + 1))  # d_mbar ... d_{m-q-1}
            for sh in enumerate_shuffles(p + 1, q):
                gx = [mbar - 1] + [b + mbar for b in sh.beta]
                gy = [a + mbar for a in sh.alpha]
                # display sign is mbar - 1 + sig; the contraction homotopy is its negative
                terms.append((degenerate_positions(x_keep, gx),
                              degenerate_positions(y_keep, gy),
                              (mbar + sh.signature) & 1))
    return tuple(terms)


def shi_pair(x, y, p: int, wrap=ProductSimplex) -> FormalSum:
    out = FormalSum(p)
    for xp, yp, e in shi_terms(x.dim):
        out.add_term(wrap((x.pick(xp), y.pick(yp))), -1 if e else 1)
    return out


def _pairwise(fn):
    def on_sum(c: FormalSum) -> FormalSum:
        p = c.p
        return c.map(lambda b: fn(b[0], b[1], p))

    return on_sum


aw = _pairwise(aw_pair)
eml = _pairwise(eml_pair)
shi = _pairwise(shi_pair)


def ez_contraction(left: ChainComplex, right: ChainComplex) -> Contraction:
    """``r_EZ = (AW, EML, SHI): C(K x L) => C(K) (x) C(L)``."""
    return Contraction(product_chains(left, right), tensor_chains(left, right), aw, eml, shi)


# ---------------------------------------------------------------------------
# flat n-fold operators
#
# Intermediate stages live in C(K^{x k}) (x) C(K)^{(x) s}; a basis element is a
# ``Mixed`` pair (product part, tensor tail).


class Mixed(tuple):
    __slots__ = ()

    def is_degenerate(self) -> bool:
        return self[0].is_degenerate() or self[1].is_degenerate()

    @property
    def degree(self) -> int:
        return self[0].dim + self[1].degree


def _mixed(prod, tail=()) -> Mixed:
    return Mixed((ProductSimplex(prod), TensorTerm(tail)))


@lru_cache(maxsize=None)
def aw_stage(b: Mixed, p: int) -> FormalSum:
    prod, tail = b
    m = prod.dim
    head = ProductSimplex(prod[:-1])
    last = prod[-1]
    out = FormalSum(p)
    for i in range(m + 1):
        out.add_term(Mixed((head.pick(_front(m, i)), TensorTerm((last.pick(_back(m, i)),) + tail))), 1)
    return out


@lru_cache(maxsize=None)
def eml_stage(b: Mixed, p: int) -> FormalSum:
    prod, tail = b
    y, rest = tail[0], TensorTerm(tail[1:])
    a, q = prod.dim, y.dim
    out = FormalSum(p)
    for sh in enumerate_shuffles(a, q):
        xs = prod.pick(degenerate_positions(range(a + 1), sh.beta))
        ys = y.pick(degenerate_positions(range(q + 1), sh.alpha))
        out.add_term(Mixed((ProductSimplex(xs + (ys,)), rest)), -1 if sh.signature & 1 else 1)
    return out


@lru_cache(maxsize=None)
def shi_stage(b: Mixed, p: int) -> FormalSum:
    prod, tail = b
    head = ProductSimplex(prod[:-1])
    last = prod[-1]
    out = FormalSum(p)
    for xp, yp, e in shi_terms(prod.dim):
        out.add_term(Mixed((ProductSimplex(head.pick(xp) + (last.pick(yp),)), tail)), -1 if e else 1)
    return out


def _stages(c: FormalSum, stage, times: int) -> FormalSum:
    p = c.p
    for _ in range(times):
        c = c.map(lambda b: stage(b, p))
    return c


def _to_mixed(c: FormalSum) -> FormalSum:
    return FormalSum(c.p, ((_mixed(x), k) for x, k in c.terms.items()))


def _from_mixed_product(c: FormalSum) -> FormalSum:
    return FormalSum(c.p, ((b[0], k) for b, k in c.terms.items()))


def _from_mixed_tensor(c: FormalSum) -> FormalSum:
    return FormalSum(c.p, ((TensorTerm(b[0] + b[1]), k) for b, k in c.terms.items()))


def aw_n(c: FormalSum) -> FormalSum:
    """``AW_(n) = AW_(n,n-1) ... AW_(n,1)`` on a chain of flat product simplices."""
    if not c:
        return FormalSum(c.p)
    n = len(next(iter(c.terms)))
    return _from_mixed_tensor(_stages(_to_mixed(c), aw_stage, n - 1))


def eml_n(c: FormalSum) -> FormalSum:
    """``EML_(n) = EML_(n,1) ... EML_(n,n-1)`` on a chain of ``n``-fold tensors."""
    if not c:
        return FormalSum(c.p)
    n = len(next(iter(c.terms)))
    mixed = FormalSum(c.p, ((_mixed(t[:1], t[1:]), k) for t, k in c.terms.items()))
    return _from_mixed_product(_stages(mixed, eml_stage, n - 1))


def esa(n: int, ell: int, c: FormalSum) -> FormalSum:
    """``ESA_(n,l) = EML_(n,1)..EML_(n,l) SHI_(n,l+1) AW_(n,l)..AW_(n,1)``."""
    if not 0 <= ell <= n - 2:
        raise ValueError(f"ESA level {ell} out of range for n = {n}")
    m = _stages(_to_mixed(c), aw_stage, ell)
    m = _stages(m, shi_stage, 1)
    m = _stages(m, eml_stage, ell)
    return _from_mixed_product(m)


def shi_n(c: FormalSum) -> FormalSum:
    """``SHI_(n) = sum_l ESA_(n,l)``."""
    if not c:
        return FormalSum(c.p)
    n = len(next(iter(c.terms)))
    out = FormalSum(c.p)
    for ell in range(n - 1):
        out.iadd(esa(n, ell, c))
    return out


def ez_n_contraction(source: ChainComplex, target: ChainComplex) -> Contraction:
    return Contraction(source, target, aw_n, eml_n, shi_n)


# ---------------------------------------------------------------------------
# permutations and the diagonal


def cyclic_t(k: int, c: FormalSum) -> FormalSum:
    """``t^k``: ``t(x_1, ..., x_n) = (x_2, ..., x_n, x_1)``; no sign."""
    if k < 0:
        raise ValueError("k must be non-negative")

    def rot(x):
        j = k % len(x)
        return FormalSum.basis(ProductSimplex(x[j:] + x[:j]), c.p)

    return c.map(rot)


def cyclic_T(k: int, c: FormalSum) -> FormalSum:
    """``T^k`` on tensors, each step signed by ``(-1)^{|x_1|(|x_2| + ... + |x_n|)}``."""
    if k < 0:
        raise ValueError("k must be non-negative")

    def rot(t):
        sign = 1
        for _ in range(k % len(t)):
            d0 = degree_of(t[0])
            if d0 & 1 and (sum(degree_of(x) for x in t[1:]) & 1):
                sign = -sign
            t = TensorTerm(t[1:] + t[:1])
        return FormalSum.basis(t, c.p, sign)

    return c.map(rot)


def diagonal(n: int, c: FormalSum) -> FormalSum:
    return c.map(lambda x: FormalSum.basis(ProductSimplex((Simplex(x),) * n), c.p))


def alpha_map(n: int, r: int, c: FormalSum) -> FormalSum:
    """``alpha_r = T - 1`` for odd ``r`` and ``1 + T + ... + T^{n-1}`` for even ``r``."""
    if r & 1:
        return cyclic_T(1, c) - c
    out = FormalSum(c.p)
    for k in range(n):
        out.iadd(cyclic_T(k, c))
    return out


def gamma_powers(n: int, j: int) -> tuple:
    """Powers of ``t`` in ``gamma_j``: ``(1,)`` for odd ``j``, ``(1, ..., n-1)`` for even ``j``."""
    return (1,) if j & 1 else tuple(range(1, n))


def twist_powers(n: int, r: int, i: int, parity: str = "gamma") -> tuple:
    """Allowed ``k_i`` for the ``i``-th (innermost = 1) twist of ``D^n_r``.

    ``parity="gamma"`` expands ``gamma_i`` directly.  ``parity="pinned"``
    instead pins ``k_i = 1`` when ``i + r`` is odd.
    """
    if parity == "gamma":
        return gamma_powers(n, i)
    if parity == "pinned":
        return (1,) if (i + r) & 1 else tuple(range(1, n))
    raise ValueError(f"unknown parity convention {parity!r}")


def naive_sequence(n: int, seq: Sequence, c: FormalSum, diag: bool = True) -> FormalSum:
    """``AW_(n) t^{k_r} ESA_(n,l_r) ... t^{k_1} ESA_(n,l_1) [Delta] (c)``.

    ``seq`` lists ``(k_i, l_i)`` from the innermost ``i = 1`` outwards.  Each
    ESA uses the explicit Shih formula, i.e. ``-1`` times the contraction
    homotopy stage.
    """
    x = diagonal(n, c) if diag else c
    for k, ell in seq:
        x = cyclic_t(k, esa(n, ell, x))
    out = aw_n(x)
    return out.scale(-1) if len(seq) & 1 else out


def naive_dnr(n: int, r: int, c: FormalSum, parity: str = "gamma") -> FormalSum:
    """``D^n_r = (-1)^r AW_(n) gamma_r SHI_(n) ... gamma_1 SHI_(n) Delta`` by brute force.

    The sign makes every ``SHI_(n)`` act as the explicit Shih formula; with
    it the recurrence ``d D_r + (-1)^{r-1} D_r d = alpha_r D_{r-1}`` holds.
    """
    x = diagonal(n, c)
    for i in range(1, r + 1):
        y = shi_n(x)
        x = FormalSum(c.p)
        for k in twist_powers(n, r, i, parity):
            x.iadd(cyclic_t(k, y))
    out = aw_n(x)
    return out.scale(-1) if r & 1 else out


def aw_n_counts(n: int, m: int) -> tuple:
    """``(summands, face_operators)`` of ``AW_(n)`` on a generic ``m``-dimensional product."""
    x = ProductSimplex(Simplex(range(100 * j, 100 * j + m + 1)) for j in range(n))
    out = aw_n(FormalSum.basis(x, 2))
    faces = sum(m - f.dim for t in out.terms for f in t)
    return len(out), faces


def aw_n_summand_count(n: int, m: int) -> int:
    return comb(m + n - 1, n - 1)


def clear_caches() -> None:
    for fn in (aw_stage, eml_stage, shi_stage):
        fn.cache_clear()
