"""Explicit contraction of ``C_*(K; Z_p)`` onto its homology.

Per degree the chain group splits as ``C_q = B_q + H_q + A_q``: ``B_q`` is
the image of the boundary, ``A_q`` a set of basis simplices whose
boundaries form a basis of ``B_{q-1}``, and ``H_q`` completes ``B_q`` to
the cycles.  With coordinates in that basis

* ``f`` keeps the ``H`` coordinates,
* ``g`` sends a generator to its representative cycle,
* ``phi`` sends the ``i``-th boundary basis vector to its chosen preimage
  in ``A_{q+1}`` and kills ``H_q`` and ``A_q``,

which satisfies every contraction axiom as well as ``f g = 1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .chains import ChainComplex, Cochain, Contraction, FormalSum, check_prime, simplicial_chains
from .simplicial import Simplex, SimplicialComplex

# ---------------------------------------------------------------------------
# linear algebra over Z_p


def rref(A: np.ndarray, p: int) -> tuple:
    """Reduced row echelon form mod ``p``; returns ``(R, pivot_columns)``.

    Pivots are taken left to right, lowest row index first.
    """
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if not nz.size:
            continue
        k = r + nz[0]
        if k != r:
            R[[r, k]] = R[[k, r]]
        R[r] = R[r] * pow(int(R[r, c]), -1, p) % p
        others = np.nonzero(R[:, c])[0]
        for i in others:
            if i != r:
                R[i] = (R[i] - R[i, c] * R[r]) % p
        pivots.append(c)
        r += 1
    return R, pivots


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Columns spanning ``ker A`` mod ``p`` (one per free column, in order)."""
    cols = A.shape[1]
    if A.shape[0] == 0:
        return np.eye(cols, dtype=np.int64)
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    N = np.zeros((cols, len(free)), dtype=np.int64)
    for j, fc in enumerate(free):
        N[fc, j] = 1
        for i, pc in enumerate(pivots):
            N[pc, j] = -R[i, fc] % p
    return N


def inverse(A: np.ndarray, p: int) -> np.ndarray:
    n = A.shape[0]
    if A.shape != (n, n):
        raise ValueError("only square matrices are invertible")
    if n == 0:
        return np.zeros((0, 0), dtype=np.int64)
    R, pivots = rref(np.hstack([A % p, np.eye(n, dtype=np.int64)]), p)
    if pivots[:n] != list(range(n)):
        raise ValueError("matrix is singular mod p")
    return R[:, n:]


# ---------------------------------------------------------------------------
# the contraction


class HomologyGenerator(tuple):
    """Basis element ``(q, j)`` of ``H_q``."""

    __slots__ = ()

    @property
    def degree(self) -> int:
        return self[0]

    dim = degree

    def is_degenerate(self) -> bool:
        return False

    def __repr__(self) -> str:
        return f"h{self[0]}_{self[1]}"


def boundary_matrix(K: SimplicialComplex, q: int, p: int) -> np.ndarray:
    """Matrix of ``d: C_q -> C_{q-1}`` (columns indexed by ``q``-simplices)."""
    src = K.nondegenerate(q)
    if q == 0:
        return np.zeros((0, len(src)), dtype=np.int64)
    tgt = {s: i for i, s in enumerate(K.nondegenerate(q - 1))}
    D = np.zeros((len(tgt), len(src)), dtype=np.int64)
    for j, x in enumerate(src):
        for i in range(q + 1):
            D[tgt[x.face(i)], j] += -1 if i & 1 else 1
    return D % p


@dataclass
class _Degree:
    cycles: np.ndarray      # columns: representative cycles of H_q
    lifts: list             # column indices in C_{q+1} whose boundaries span B_q
    n_b: int
    change: np.ndarray      # M_q^{-1}: coordinates (B | H | A) of a chain


class HomologyContraction:
    """Reduction of ``C_*(K; Z_p)`` to ``H_*(K; Z_p)`` with explicit ``(f, g, phi)``."""

    def __init__(self, K: SimplicialComplex, p: int):
        self.K = K
        self.p = check_prime(p)
        top = K.dim
        self.bases = [K.nondegenerate(q) for q in range(top + 1)]
        self.index = [{s: i for i, s in enumerate(b)} for b in self.bases]
        D = [boundary_matrix(K, q, p) for q in range(top + 2)]
        self.boundaries = D
        self._deg = []
        lifts_into = []  # per q: pivot columns of D_{q+1}
        for q in range(top + 1):
            _, piv = rref(D[q + 1], p) if D[q + 1].size else (None, [])
            lifts_into.append(piv)
        for q in range(top + 1):
            size = len(self.bases[q])
            piv = lifts_into[q]
            B = D[q + 1][:, piv] if piv else np.zeros((size, 0), dtype=np.int64)
            Z = nullspace(D[q], p) if size else np.zeros((0, 0), dtype=np.int64)
            _, ext = rref(np.hstack([B, Z]), p) if size else (None, [])
            H = np.hstack([B, Z])[:, [c for c in ext if c >= B.shape[1]]] if size else Z
            A_cols = lifts_into[q - 1] if q >= 1 else []
            A = np.zeros((size, len(A_cols)), dtype=np.int64)
            for j, c in enumerate(A_cols):
                A[c, j] = 1
            M = np.hstack([B, H, A]) % p
            change = inverse(M, p)
            self._deg.append(_Degree(H % p, piv, B.shape[1], change))
        self.source = simplicial_chains(K)
        self.target = ChainComplex(
            f"H({K.name}; Z_{p})",
            lambda q: [HomologyGenerator((q, j)) for j in range(self.rank(q))],
            lambda b, p_: FormalSum(p_),
        )

    # -- bookkeeping -------------------------------------------------------

    def rank(self, q: int) -> int:
        if not 0 <= q < len(self._deg):
            return 0
        return self._deg[q].cycles.shape[1]

    @property
    def ranks(self) -> tuple:
        return tuple(self.rank(q) for q in range(len(self._deg)))

    def _vector(self, c: FormalSum, q: int) -> np.ndarray:
        v = np.zeros(len(self.bases[q]), dtype=np.int64)
        for s, k in c.terms.items():
            if s.dim == q:
                v[self.index[q][s]] = k
        return v

    def _by_degree(self, c: FormalSum) -> dict:
        degs = {}
        for s in c.terms:
            degs.setdefault(s.dim, None)
        return degs

    def _chain(self, v: np.ndarray, q: int) -> FormalSum:
        out = FormalSum(self.p)
        for i in np.nonzero(v % self.p)[0]:
            out.add_term(self.bases[q][i], int(v[i]))
        return out

    # -- the three maps ----------------------------------------------------

    def f(self, c: FormalSum) -> FormalSum:
        out = FormalSum(c.p)
        for q in self._by_degree(c):
            if q >= len(self._deg):
                continue
            d = self._deg[q]
            coords = d.change @ self._vector(c, q) % self.p
            for j in range(self.rank(q)):
                out.add_term(HomologyGenerator((q, j)), int(coords[d.n_b + j]))
        return out

    def g(self, c: FormalSum) -> FormalSum:
        out = FormalSum(c.p)
        for (q, j), k in c.terms.items():
            out.iadd(self.generator_chain(q, j), k)
        return out

    def phi(self, c: FormalSum) -> FormalSum:
        out = FormalSum(c.p)
        for q in self._by_degree(c):
            if q >= len(self._deg):
                continue
            d = self._deg[q]
            coords = d.change @ self._vector(c, q) % self.p
            for i, col in enumerate(d.lifts):
                if coords[i]:
                    out.add_term(self.bases[q + 1][col], int(coords[i]))
        return out

    @cached_property
    def contraction(self) -> Contraction:
        return Contraction(self.source, self.target, self.f, self.g, self.phi)

    # -- (co)homology bases ------------------------------------------------

    def generator_chain(self, q: int, j: int) -> FormalSum:
        """Representative cycle ``g(h_{q,j})``."""
        return self._chain(self._deg[q].cycles[:, j], q)

    def homology_basis(self, q: int) -> list:
        return [self.generator_chain(q, j) for j in range(self.rank(q))]

    def cohomology_basis(self, q: int) -> list:
        """Dual generators ``alpha* f`` as cocycles, one per homology generator."""
        if not 0 <= q < len(self._deg):
            return []
        d = self._deg[q]
        out = []
        for j in range(self.rank(q)):
            row = d.change[d.n_b + j]
            vals = {self.bases[q][i]: int(row[i]) for i in np.nonzero(row)[0]}
            out.append(Cochain(q, vals, self.p))
        return out

    def class_of(self, c: Cochain) -> tuple:
        """Coordinates of a cocycle's class in the dual basis: ``c(g(h_j))``."""
        return tuple(c(self.generator_chain(c.degree, j)) for j in range(self.rank(c.degree)))


def compute_contraction(K: SimplicialComplex, p: int = 2) -> HomologyContraction:
    return HomologyContraction(K, p)


def operation_matrix(req, K, jobs: int = 1) -> np.ndarray:
    """Matrix of ``Sq^i`` or ``P^k_p`` from ``H^q`` to the target degree.

    ``K`` is a complex or an already computed :class:`HomologyContraction`.
    Entry ``[b, a]`` is the value of the operation on the ``a``-th source
    generator evaluated on the ``b``-th target homology generator.
    """
    from .steenrod import apply_operation

    req.validate()
    H = K if isinstance(K, HomologyContraction) else compute_contraction(K, req.p)
    if H.p != req.p:
        raise ValueError("contraction prime does not match the request")
    sources = H.cohomology_basis(req.q)
    tq = req.target_degree
    targets = H.homology_basis(tq)
    M = np.zeros((len(targets), len(sources)), dtype=np.int64)
    if not sources or not targets:
        return M
    if jobs > 1 and len(sources) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(jobs) as pool:
            images = list(pool.map(lambda c: apply_operation(req, c, H.K), sources))
    else:
        images = [apply_operation(req, c, H.K) for c in sources]
    for a, img in enumerate(images):
        for b, z in enumerate(targets):
            M[b, a] = img(z)
    return M
