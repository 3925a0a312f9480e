"""Finite-dimensional representations of SL2(Z) given by images of S and T.

Covers symmetric powers of the defining representation, the representation
attached to the polynomial vector C(tau), intertwiner search, and the modified
Jordan form of the T-image with blocks lambda(I + N), N the subdiagonal of
ones.  That block convention is what makes F(tau+1) = rho(T) F(tau) hold
componentwise for logarithmic expansions.
"""

from __future__ import annotations

import cmath
import math
import random
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import (BackendMismatch, DimensionMismatch, IllConditioned,
                     NonUnitaryEigenvalue, RelationViolation, SingularMatrix)
from .linalg import EXACT, FLOAT, Matrix, QI
from .modgroup import S as GEN_S
from .modgroup import T as GEN_T
from .modgroup import UnimodularMatrix, word_decompose

RELATION_TOL = 1e-9
MU_SNAP_TOL = 1e-9
MU_SNAP_DENOMINATOR = 96
CLUSTER_TOL = 1e-6


def relation_residual(S_img: Matrix, T_img: Matrix) -> float:
    """Deviation from S^4 = I and (ST)^3 = S^2; exactly 0.0 on the exact backend.

    An exact pair that fails reports the floating Frobenius deviation, which
    is nonzero and finite.
    """
    p = S_img.shape[0]
    ident = Matrix.identity(p, S_img.backend)
    s2 = S_img @ S_img
    s4 = s2 @ s2
    st = S_img @ T_img
    st3 = st @ st @ st
    dist = max(s4.frobenius_distance(ident.to_numpy()),
               st3.frobenius_distance(s2.to_numpy()))
    if S_img.backend == EXACT:
        if s4 == ident and st3 == s2:
            return 0.0
        return max(dist, 1e-300)   # exact failure must not round to 0.0
    return dist


class Representation:
    """Images of the generators S and T, with the defining relations enforced.

    Instances are immutable apart from an idempotent T-power memo, so
    concurrent read-only use is safe.
    """

    def __init__(self, S_img: Matrix, T_img: Matrix, tol: float = RELATION_TOL):
        if S_img.backend != T_img.backend:
            raise BackendMismatch("S and T images must share a backend")
        if S_img.shape != T_img.shape or S_img.shape[0] != S_img.shape[1]:
            raise DimensionMismatch("generator images must be square and equal-sized")
        self.S_img = S_img
        self.T_img = T_img
        residual = relation_residual(S_img, T_img)
        if residual > (0 if S_img.backend == EXACT else tol):
            raise RelationViolation(
                f"S^4 = I or (ST)^3 = S^2 fails (residual {residual:.3g})")
        self._T_pows = {0: Matrix.identity(self.p, self.backend), 1: T_img}

    @property
    def backend(self) -> str:
        return self.S_img.backend

    @property
    def p(self) -> int:
        return self.S_img.shape[0]

    def T_power(self, n: int) -> Matrix:
        """T_img^n, memoized; words revisit the same translation powers often."""
        if n not in self._T_pows:
            if n < 0:
                if -1 not in self._T_pows:
                    self._T_pows[-1] = self.T_img.inv()
                self._T_pows[n] = self._T_pows[-1] ** (-n)
            else:
                self._T_pows[n] = self.T_img ** n
        return self._T_pows[n]

    def to_float(self) -> "Representation":
        if self.backend == FLOAT:
            return self
        return Representation(self.S_img.to_float(), self.T_img.to_float())

    def __repr__(self):
        return f"Representation(p={self.p}, backend={self.backend})"


def rep_evaluate_word(rep: Representation, word) -> Matrix:
    """Multiply generator images along a word's tokens."""
    out = rep.S_img @ rep.S_img if word.negate else Matrix.identity(rep.p, rep.backend)
    for t in word.tokens:
        out = out @ (rep.S_img if t == "S" else rep.T_power(t))
    return out


def rep_evaluate(rep: Representation, g: UnimodularMatrix) -> Matrix:
    """rho(g), computed along the canonical S/T word of g.

    Well-defined because the relations S^4 = I and (ST)^3 = S^2 are enforced
    at construction.
    """
    return rep_evaluate_word(rep, word_decompose(g))


# ---------------------------------------------------------------------------
# symmetric powers and the representation attached to C(tau)
# ---------------------------------------------------------------------------

def _binomial_row(g: UnimodularMatrix, j: int, deg: int):
    """Coefficients (by X-exponent 0..deg) of (aX+bY)^j (cX+dY)^{deg-j}."""
    a, b, c, d = g.entries()
    first = [math.comb(j, k) * a ** k * b ** (j - k) for k in range(j + 1)]
    second = [math.comb(deg - j, t) * c ** t * d ** (deg - j - t)
              for t in range(deg - j + 1)]
    out = [0] * (deg + 1)
    for k, u in enumerate(first):
        for t, v in enumerate(second):
            out[k + t] += u * v
    return out


def sym_power_image(g: UnimodularMatrix, p: int) -> Matrix:
    """Image of g in the (p-1)-th symmetric power of the defining representation.

    Basis e_i = X^{p-1-i} Y^i; row i lists the expansion of e_i under
    X -> aX + bY, Y -> cX + dY.
    """
    deg = p - 1
    rows = []
    for i in range(p):
        conv = _binomial_row(g, deg - i, deg)
        rows.append([QI(conv[deg - m]) for m in range(p)])
    return Matrix.exact(rows)


def sym_power_rep(p: int) -> Representation:
    """The (p-1)-th symmetric power as a representation on exact matrices."""
    if p < 1:
        raise ValueError("dimension must be >= 1")
    return Representation(sym_power_image(GEN_S, p), sym_power_image(GEN_T, p))


def sigma_image(g: UnimodularMatrix, p: int) -> Matrix:
    """The matrix acting on C(tau) = (tau^{p-1}, ..., 1)^t by the weight-(1-p) slash.

    Solved by matching coefficients of tau^j |_{1-p} g = (a tau+b)^j (c tau+d)^{p-1-j}
    against the monomial entries of C.
    """
    from .polyring import poly, poly_mul, poly_pow
    a, b, c, d = g.entries()
    deg = p - 1
    rows = []
    for i in range(p):
        j = deg - i
        expanded = poly_mul(poly_pow(poly([b, a]), j), poly_pow(poly([d, c]), deg - j))
        padded = list(expanded) + [QI(0)] * (deg + 1 - len(expanded))
        rows.append([padded[deg - m] for m in range(p)])
    return Matrix.exact(rows)


def sigma_rep(p: int) -> Representation:
    """The unique representation with sigma(g) C = C |_{1-p} g for g in {S, T}."""
    if p < 1:
        raise ValueError("dimension must be >= 1")
    return Representation(sigma_image(GEN_S, p), sigma_image(GEN_T, p))


def trivial_rep() -> Representation:
    return sym_power_rep(1)


# ---------------------------------------------------------------------------
# intertwiners and conjugation
# ---------------------------------------------------------------------------

def _commutant_system(rho: Representation, rho2: Representation) -> Matrix:
    """Linear system in vec(A) (row-major) for A rho(g) = rho2(g) A, g in {S,T}."""
    p = rho.p
    backend = rho.backend
    rows = []
    for X, Y in ((rho.S_img, rho2.S_img), (rho.T_img, rho2.T_img)):
        for i in range(p):
            for j in range(p):
                if backend == EXACT:
                    row = [QI(0)] * (p * p)
                else:
                    row = [0j] * (p * p)
                for k in range(p):
                    row[i * p + k] = row[i * p + k] + X.entry(k, j)
                    row[k * p + j] = row[k * p + j] - Y.entry(i, k)
                rows.append(row)
    return Matrix.exact(rows) if backend == EXACT else Matrix.from_float(rows)


def _unvec(v, p, backend) -> Matrix:
    rows = [[v[i * p + j] for j in range(p)] for i in range(p)]
    return Matrix.exact(rows) if backend == EXACT else Matrix.from_float(rows)


def _is_invertible(A: Matrix) -> bool:
    if A.backend == EXACT:
        return bool(A.det())
    s = np.linalg.svd(A.arr, compute_uv=False)
    return s.size > 0 and s[-1] > 1e-9 * max(s[0], 1.0)


def find_intertwiner(rho: Representation, rho2: Representation,
                     seed: int = 0, tries: int = 50):
    """An invertible A with A rho(g) = rho2(g) A on the generators, or None.

    The solution space of the two linear constraints is searched for an
    invertible element: each basis vector first, then seeded random integer
    combinations (coefficients in [-5, 5]).
    """
    if rho.p != rho2.p:
        raise DimensionMismatch(f"dimensions differ: {rho.p} vs {rho2.p}")
    if rho.backend != rho2.backend:
        raise BackendMismatch("intertwiner search needs a common backend")
    p = rho.p
    basis = _commutant_system(rho, rho2).nullspace()
    if not basis:
        return None
    candidates = [_unvec(v, p, rho.backend) for v in basis]
    for A in candidates:
        if _is_invertible(A):
            return A
    rng = random.Random(seed)
    for _ in range(tries):
        coeffs = [rng.randint(-5, 5) for _ in basis]
        if not any(coeffs):
            continue
        A = Matrix.zeros(p, p, rho.backend)
        for c, cand in zip(coeffs, candidates):
            A = A + cand.scale(c)
        if _is_invertible(A):
            return A
    return None


def conjugate(rep: Representation, A: Matrix) -> Representation:
    """The representation with images A X A^{-1}; relations are preserved."""
    if A.backend != rep.backend:
        raise BackendMismatch("conjugating matrix must match the rep backend")
    if A.shape != (rep.p, rep.p):
        raise DimensionMismatch("conjugating matrix has wrong shape")
    if not _is_invertible(A):
        raise SingularMatrix("conjugating matrix is singular")
    A_inv = A.inv()
    return Representation(A @ rep.S_img @ A_inv, A @ rep.T_img @ A_inv)


# ---------------------------------------------------------------------------
# modified Jordan form of the T-image
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class JordanData:
    """Block data (mu_i, m_i) sorted by decreasing size, with the basis P.

    P^{-1} T P is block diagonal with i-th block e^{2 pi i mu_i} (I + N).
    """

    blocks: tuple
    P: Matrix

    @property
    def p(self) -> int:
        return sum(m for _, m in self.blocks)

    @property
    def max_block(self) -> int:
        return max(m for _, m in self.blocks)

    def block_matrix(self) -> Matrix:
        """Reassembled block-diagonal matrix, in the backend of P."""
        from .qexp import exact_root_of_unity, root_of_unity
        p = self.p
        exact = self.P.backend == EXACT
        rows = [[QI(0) if exact else 0j] * p for _ in range(p)]
        off = 0
        for mu, m in self.blocks:
            lam = exact_root_of_unity(mu) if exact else root_of_unity(mu)
            for l in range(m):
                rows[off + l][off + l] = lam
                if l + 1 < m:
                    rows[off + l + 1][off + l] = lam
            off += m
        return Matrix.exact(rows) if exact else Matrix.from_float(rows)


def snap_mu(mu_raw: float):
    """Map a phase in [0,1) to the nearest small-denominator rational if close."""
    mu_raw = mu_raw % 1.0
    cand = Fraction(mu_raw).limit_denominator(MU_SNAP_DENOMINATOR) % 1
    if abs(mu_raw - float(cand)) < MU_SNAP_TOL or abs(mu_raw - float(cand) - 1) < MU_SNAP_TOL \
            or abs(mu_raw - float(cand) + 1) < MU_SNAP_TOL:
        return cand
    return None


def _float_chain_tops(A: np.ndarray, mult: int, p: int):
    """Kernel filtration of A and chain tops per grade, numerically."""
    kernels = [np.zeros((p, 0), dtype=complex)]
    k = 0
    Ak = np.eye(p, dtype=complex)
    while kernels[-1].shape[1] < mult:
        k += 1
        if k > p:
            raise IllConditioned("kernel filtration failed to reach the multiplicity")
        Ak = Ak @ A
        u, s, vh = np.linalg.svd(Ak)
        smax = s[0] if s.size else 0.0
        null_cols = [vh[i].conj() for i in range(p)
                     if i >= s.size or s[i] <= CLUSTER_TOL * max(smax, 1.0)]
        kernels.append(np.array(null_cols, dtype=complex).T
                       if null_cols else np.zeros((p, 0), dtype=complex))
    dims = [kern.shape[1] for kern in kernels]
    s_max = len(dims) - 1

    def rank_of(cols):
        if cols.shape[1] == 0:
            return 0
        sv = np.linalg.svd(cols, compute_uv=False)
        return int(np.sum(sv > 1e-8 * max(sv[0], 1.0)))

    tops = []      # (grade, vector)
    height = []    # for chains of grade > k: their vector pushed down to height k
    for k in range(s_max, 0, -1):
        ge_k = dims[k] - dims[k - 1]
        ge_k1 = (dims[k + 1] - dims[k]) if k + 1 <= s_max else 0
        need = ge_k - ge_k1
        cols = [kernels[k - 1][:, i] for i in range(kernels[k - 1].shape[1])] + height
        exclude = np.array(cols, dtype=complex).T if cols else np.zeros((p, 0), dtype=complex)
        base_rank = rank_of(exclude)
        new_tops = []
        for idx in range(kernels[k].shape[1]):
            if len(new_tops) == need:
                break
            v = kernels[k][:, idx]
            trial = np.hstack([exclude, v.reshape(-1, 1)])
            r = rank_of(trial)
            if r > base_rank:
                new_tops.append(v)
                exclude = trial
                base_rank = r
        if len(new_tops) != need:
            raise IllConditioned(
                f"could not select {need} chain tops of grade {k} (got {len(new_tops)})")
        tops.extend((k, v) for v in new_tops)
        height = [A @ w for w in height] + [A @ v for v in new_tops]
    return tops


def _chain_merge(lams, radius):
    clusters = []
    for lam in lams:
        hit = [cl for cl in clusters if any(abs(lam - x) < radius for x in cl)]
        merged = [lam] + [x for cl in hit for x in cl]
        clusters = [cl for cl in clusters if cl not in hit] + [merged]
    return clusters


def _jordan_float(arr: np.ndarray) -> JordanData:
    p = arr.shape[0]
    lams = list(np.linalg.eigvals(arr))
    # Chain-merge eigenvalues: a defective eigenvalue of grade m scatters by
    # about eps^(1/m) while its cluster mean is eps-accurate, so a wider
    # second pass rescues large blocks; bad merges cannot survive the final
    # reassembly validation.
    clusters = None
    for radius in (CLUSTER_TOL, 1e-4):
        cand = _chain_merge(lams, radius)
        if all(abs(abs(sum(cl) / len(cl)) - 1) <= 1e-8 for cl in cand):
            clusters = cand
            break
    if clusters is None:
        clusters = _chain_merge(lams, CLUSTER_TOL)
        worst = max(abs(abs(sum(cl) / len(cl)) - 1) for cl in clusters)
        raise NonUnitaryEigenvalue(
            f"an eigenvalue cluster mean deviates from the unit circle "
            f"by {worst:.3g}")
    blocks = []
    for members in clusters:
        center = sum(members) / len(members)
        mu_raw = (cmath.phase(center) / (2 * math.pi)) % 1.0
        mu = snap_mu(mu_raw)
        if mu is not None:
            lam0 = cmath.exp(2j * math.pi * float(mu))
        else:
            mu = Fraction(mu_raw).limit_denominator(10 ** 9)
            lam0 = center
        A = arr - lam0 * np.eye(p)
        tops = _float_chain_tops(A, len(members), p)
        for grade, v in tops:
            chain = [v]
            for _ in range(grade - 1):
                chain.append((A @ chain[-1]) / lam0)
            blocks.append((mu, grade, chain))
    blocks.sort(key=lambda t: (-t[1], t[0]))
    columns = []
    for _, _, chain in blocks:
        columns.extend(chain)
    P = Matrix.from_float(np.array(columns, dtype=complex).T)
    data = JordanData(tuple((mu, m) for mu, m, _ in blocks), P)
    _validate_jordan(arr, data)
    return data


def _validate_jordan(arr: np.ndarray, data: JordanData):
    P = data.P.to_numpy()
    if abs(np.linalg.det(P)) < 1e-12:
        raise IllConditioned("assembled Jordan basis is numerically singular")
    J = data.block_matrix().to_numpy()
    resid = np.linalg.norm(P @ J @ np.linalg.inv(P) - arr)
    if resid > 1e-8 * max(1.0, float(np.linalg.norm(arr))):
        raise IllConditioned(f"Jordan reassembly residual {resid:.3g} too large")


def _exact_kernel_cols(M: Matrix):
    return [list(v) for v in M.nullspace()]


def _jordan_exact(T: Matrix):
    """Exact Jordan data when every eigenvalue lies in Q(i); None otherwise."""
    p = T.shape[0]
    candidates = [(Fraction(0), QI(1)), (Fraction(1, 2), QI(-1)),
                  (Fraction(1, 4), QI(0, 1)), (Fraction(3, 4), QI(0, -1))]
    ident = Matrix.identity(p, EXACT)
    found = []
    total = 0
    for mu, lam in candidates:
        A = T - ident.scale(lam)
        dims = [0]
        kernels = [[]]
        Ak = ident
        while True:
            Ak = Ak @ A
            kern = _exact_kernel_cols(Ak)
            if len(kern) == dims[-1]:
                break
            dims.append(len(kern))
            kernels.append(kern)
            if len(kern) == p:
                break
        mult = dims[-1]
        if mult:
            found.append((mu, lam, A, dims, kernels))
            total += mult
    if total != p:
        return None

    blocks = []
    for mu, lam, A, dims, kernels in found:
        s_max = len(dims) - 1
        tops = []
        height = []
        for k in range(s_max, 0, -1):
            ge_k = dims[k] - dims[k - 1]
            ge_k1 = (dims[k + 1] - dims[k]) if k + 1 <= s_max else 0
            need = ge_k - ge_k1
            exclude = [list(v) for v in kernels[k - 1]] + [list(c) for c in height]
            base_rank = Matrix.exact(exclude).rank() if exclude else 0
            new_tops = []
            for v in kernels[k]:
                if len(new_tops) == need:
                    break
                trial = exclude + [list(v)]
                if Matrix.exact(trial).rank() > base_rank:
                    new_tops.append(v)
                    exclude = trial
                    base_rank += 1
            if len(new_tops) != need:
                raise IllConditioned("exact chain-top selection failed")
            tops.extend((k, v) for v in new_tops)
            height = [A.apply(w) for w in height] + [A.apply(v) for v in new_tops]
        lam_inv = QI(1) / lam
        for grade, v in tops:
            chain = [list(v)]
            for _ in range(grade - 1):
                chain.append([lam_inv * x for x in A.apply(chain[-1])])
            blocks.append((mu, grade, chain))
    blocks.sort(key=lambda t: (-t[1], t[0]))
    columns = []
    for _, _, chain in blocks:
        columns.extend(chain)
    P = Matrix.exact(columns).transpose()
    if not P.det():
        raise IllConditioned("exact Jordan basis is singular")
    data = JordanData(tuple((mu, m) for mu, m, _ in blocks), P)
    if P @ data.block_matrix() @ P.inv() != T:
        raise IllConditioned("exact Jordan reassembly mismatch")
    return data


def modified_jordan_T(rep_or_matrix) -> JordanData:
    """Modified Jordan canonical form of the T-image.

    Exact when the matrix is exact and all eigenvalues lie in Q(i); otherwise
    computed in floating point with mu snapped to denominators <= 96.
    """
    T = rep_or_matrix.T_img if isinstance(rep_or_matrix, Representation) else rep_or_matrix
    if T.backend == EXACT:
        data = _jordan_exact(T)
        if data is not None:
            return data
    return _jordan_float(T.to_numpy())
