"""Cup-i products, Steenrod squares and reduced p-th powers.

Every operation evaluates a face-only formula for ``D^n_r`` on the
simplices of the target degree and keeps only the summands whose factors
have the degree of the input cochain.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .chains import Cochain, FormalSum, check_prime, evaluate_tensor_cochain
from .ez import alpha_map
from .simplicial import Simplex, SimplicialComplex
from .simplifier import IntervalFormula, count_face_operators, evaluate_formula, generate_dnr


class InvalidRequest(ValueError):
    pass


@dataclass(frozen=True)
class OperationRequest:
    """``Sq^index`` (p = 2) or ``P^index_p`` (p odd) on ``H^q``."""

    p: int
    kind: str
    index: int
    q: int

    def validate(self) -> "OperationRequest":
        try:
            check_prime(self.p)
        except ValueError as exc:
            raise InvalidRequest(str(exc)) from None
        if self.q < 0 or self.index < 0:
            raise InvalidRequest("degrees and indices must be non-negative")
        if self.kind == "square":
            if self.p != 2:
                raise InvalidRequest("Steenrod squares need p = 2")
            if self.index > self.q:
                raise InvalidRequest(f"Sq^{self.index} is zero on H^{self.q}; need i <= q")
        elif self.kind == "power":
            if self.p == 2:
                raise InvalidRequest("reduced powers need an odd prime")
            if self.q < 2 * self.index:
                raise InvalidRequest(f"P^{self.index} needs q >= 2k, got q = {self.q}")
        else:
            raise InvalidRequest(f"unknown operation kind {self.kind!r}")
        return self

    @property
    def target_degree(self) -> int:
        if self.kind == "square":
            return self.q + self.index
        return self.q + 2 * self.index * (self.p - 1)

    @property
    def diagonal(self) -> tuple:
        """``(n, r)`` of the higher diagonal the operation evaluates."""
        if self.kind == "square":
            return 2, self.q - self.index
        return self.p, (self.q - 2 * self.index) * (self.p - 1)


def normalization_constant(p: int, k: int, q: int) -> int:
    """``R = (-1)^{(p-1)(k + q(q-1)/2)} (((p-1)/2)!)^{2k-q}`` mod ``p``."""
    check_prime(p)
    sign = -1 if ((p - 1) * (k + q * (q - 1) // 2)) & 1 else 1
    return sign * pow(math.factorial((p - 1) // 2), 2 * k - q, p) % p


class HigherDiagonal:
    """``D^n_r`` as a face-only formula plus the diagonal."""

    def __init__(self, n: int, r: int):
        self.n, self.r = n, r
        self.formula: IntervalFormula = generate_dnr(n, r)

    def __call__(self, x, p: int, degrees: Optional[tuple] = None) -> FormalSum:
        return evaluate_formula(self.formula, x, p, degrees=degrees)

    def alpha(self, c: FormalSum) -> FormalSum:
        """``alpha_r``: ``T - 1`` for odd ``r``, the norm map for even ``r``."""
        return alpha_map(self.n, self.r, c)

    def face_operators(self, m: int) -> int:
        return count_face_operators(self.formula, m)


def higher_diagonal(n: int, r: int) -> HigherDiagonal:
    if n < 2 or r < 0:
        raise ValueError("need n >= 2 and r >= 0")
    return HigherDiagonal(n, r)


def _evaluate_power(cochains, D: HigherDiagonal, K: SimplicialComplex, degree: int, p: int,
                    scale: int = 1) -> Cochain:
    degs = tuple(c.degree for c in cochains)
    vals = {}
    for x in K.nondegenerate(degree):
        v = evaluate_tensor_cochain(cochains, D(x, p, degs)) * scale % p
        if v:
            vals[x] = v
    return Cochain(degree, vals, p)


def cup_i(c: Cochain, c2: Cochain, i: int, K: SimplicialComplex) -> Cochain:
    """``c cup_i c2 = mu (c (x) c2) D^2_i`` of degree ``|c| + |c2| - i``."""
    if c.p != c2.p:
        raise ValueError("cochains over different primes")
    if i < 0:
        raise ValueError("cup_i needs i >= 0")
    degree = c.degree + c2.degree - i
    if degree < 0 or i > min(c.degree, c2.degree):
        return Cochain.zero(max(degree, 0), c.p)
    return _evaluate_power((c, c2), higher_diagonal(2, i), K, degree, c.p)


def cup(c: Cochain, c2: Cochain, K: SimplicialComplex) -> Cochain:
    """Classical cup product: ``c`` on the front face times ``c2`` on the back face."""
    degree = c.degree + c2.degree
    vals = {}
    for x in K.nondegenerate(degree):
        v = c(Simplex(x[: c.degree + 1])) * c2(Simplex(x[c.degree:])) % c.p
        if v:
            vals[x] = v
    return Cochain(degree, vals, c.p)


def steenrod_square(i: int, c: Cochain, K: SimplicialComplex) -> Cochain:
    """Cochain-level ``Sq^i c = c cup_{q-i} c`` (``p = 2``)."""
    OperationRequest(c.p, "square", i, c.degree).validate()
    return cup_i(c, c, c.degree - i, K)


def steenrod_power(k: int, c: Cochain, K: SimplicialComplex) -> Cochain:
    """Cochain-level ``P^k_p c = R mu c^{(x)p} D^p_{(q-2k)(p-1)}``."""
    p, q = c.p, c.degree
    req = OperationRequest(p, "power", k, q).validate()
    n, r = req.diagonal
    R = normalization_constant(p, k, q)
    return _evaluate_power((c,) * p, higher_diagonal(n, r), K, req.target_degree, p, R)


def apply_operation(req: OperationRequest, c: Cochain, K: SimplicialComplex) -> Cochain:
    if req.kind == "square":
        return steenrod_square(req.index, c, K)
    return steenrod_power(req.index, c, K)
