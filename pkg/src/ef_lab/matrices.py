"""Dense complex matrix algebra with two norms and the special matrices the games use.

Matrices are thin immutable wrappers around complex128 numpy arrays.  The
operator norm comes from a hand-rolled power iteration and Hermitian
diagonalisation from cyclic complex Jacobi rotations; both are adequate and
well-conditioned for the m <= 64 sizes this laboratory works at.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "ComplexMatrix",
    "Permutation",
    "NonConvergenceError",
    "RoundingUnstableError",
    "ImpossibleInputError",
    "matmul",
    "adjoint",
    "hs_norm",
    "op_norm",
    "rotation",
    "line_projection",
    "identity",
    "zeros",
    "permutation_matrix",
    "standard_partial_isometry",
    "round_to_partial_isometry",
    "hermitian_eig",
    "matrix_to_json",
    "matrix_from_json",
]


class NonConvergenceError(RuntimeError):
    """An iterative routine hit its iteration cap without meeting tolerance."""


class RoundingUnstableError(ValueError):
    """Spectrum not clustered near {0, 1}; rounding would be arbitrary."""


class ImpossibleInputError(ValueError):
    """Rounded ranks cannot satisfy the complementary-projection identity."""


@dataclass(frozen=True)
class ComplexMatrix:
    data: np.ndarray

    def __post_init__(self):
        arr = np.array(self.data, dtype=np.complex128)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"matrix must be square, got shape {arr.shape}")
        if not (np.all(np.isfinite(arr.real)) and np.all(np.isfinite(arr.imag))):
            raise ValueError("matrix entries must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "data", arr)

    @property
    def m(self):
        return self.data.shape[0]

    def __matmul__(self, other):
        return matmul(self, other)

    def __add__(self, other):
        self._check_dim(other)
        return ComplexMatrix(self.data + other.data)

    def __sub__(self, other):
        self._check_dim(other)
        return ComplexMatrix(self.data - other.data)

    def __mul__(self, scalar):
        return ComplexMatrix(self.data * complex(scalar))

    __rmul__ = __mul__

    def _check_dim(self, other):
        if self.m != other.m:
            raise ValueError(f"dimension mismatch: {self.m} vs {other.m}")

    def adjoint(self):
        return adjoint(self)

    def close_to(self, other, tol=1e-9):
        return self.m == other.m and np.max(np.abs(self.data - other.data)) <= tol

    def __repr__(self):
        return f"ComplexMatrix(m={self.m})"


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(len(images))):
            raise ValueError(f"not a permutation of 0..{len(images) - 1}: {images}")
        object.__setattr__(self, "images", images)

    @property
    def degree(self):
        return len(self.images)

    def __call__(self, x):
        return self.images[x]

    def compose(self, other):
        """self after other: (self * other)(x) = self(other(x))."""
        if self.degree != other.degree:
            raise ValueError("degree mismatch")
        return Permutation(tuple(self.images[other.images[x]] for x in range(self.degree)))

    @staticmethod
    def identity(m):
        return Permutation(tuple(range(m)))

    @staticmethod
    def random(m, rng):
        return Permutation(tuple(int(v) for v in rng.permutation(m)))


def identity(m):
    return ComplexMatrix(np.eye(m, dtype=np.complex128))


def zeros(m):
    return ComplexMatrix(np.zeros((m, m), dtype=np.complex128))


def matmul(a, b):
    if a.m != b.m:
        raise ValueError(f"dimension mismatch: {a.m} vs {b.m}")
    return ComplexMatrix(a.data @ b.data)


def adjoint(a):
    return ComplexMatrix(a.data.conj().T)


def hs_norm(a):
    """Dimension-normalized Frobenius norm: the identity has norm 1."""
    arr = a.data if isinstance(a, ComplexMatrix) else np.asarray(a)
    m = arr.shape[0]
    return math.sqrt(float(np.sum(np.abs(arr) ** 2)) / m)


def _power_iteration_norm(arr, tol, max_iter):
    """Largest singular value: power method on a*a driven by repeated squaring.

    Normalized squaring doubles the effective iteration count each step, so
    48 squarings apply the power method a*a to the 2^48-th power.  That
    separates top eigengaps down to machine scale, and clusters tighter than
    that perturb the Rayleigh value by less than the cluster width itself.
    Plain iteration stagnates on tiny gaps (and its incremental convergence
    tests are blind to multi-scale decay), which is why the squared operator
    drives the iteration; several random probe vectors guard against an
    unlucky start landing in a null direction.
    """
    m = arr.shape[0]
    scale = float(np.max(np.abs(arr)))
    if scale == 0.0:
        return 0.0
    b = arr.conj().T @ arr
    norm_b = np.linalg.norm(b)
    c = b / norm_b
    squarings = min(48, max(8, max_iter))
    for _ in range(squarings):
        c = c @ c
        norm_c = np.linalg.norm(c)
        if norm_c == 0.0 or not np.isfinite(norm_c):
            raise NonConvergenceError("power iteration produced a non-finite iterate")
        c = c / norm_c
    rng = np.random.default_rng(12345)
    best = 0.0
    for _ in range(3):
        v = c @ (rng.normal(size=m) + 1j * rng.normal(size=m))
        nv = np.linalg.norm(v)
        if nv < 1e-200:
            continue  # probe hit a null direction; restart with a fresh vector
        v = v / nv
        for _ in range(2):  # polish with the original iteration matrix
            w = b @ v
            nw = np.linalg.norm(w)
            if nw == 0.0:
                break
            v = w / nw
        best = max(best, float(np.linalg.norm(arr @ v)))
    if not math.isfinite(best):
        raise NonConvergenceError("power iteration produced a non-finite estimate")
    return best


def op_norm(a, tol=1e-12, max_iter=10_000):
    """Largest singular value (the maximal stretching factor) to within tol."""
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    arr = a.data if isinstance(a, ComplexMatrix) else np.asarray(a, dtype=np.complex128)
    return _power_iteration_norm(arr, tol, max_iter)


def rotation(alpha):
    c, s = math.cos(alpha), math.sin(alpha)
    return ComplexMatrix(np.array([[c, -s], [s, c]], dtype=np.complex128))


def line_projection():
    return ComplexMatrix(np.array([[0.5, 0.5], [0.5, 0.5]], dtype=np.complex128))


def permutation_matrix(p):
    m = p.degree
    out = np.zeros((m, m), dtype=np.complex128)
    for j in range(m):
        out[p(j), j] = 1.0
    return ComplexMatrix(out)


def standard_partial_isometry(m):
    """The block shift sending the second half of the basis onto the first.

    Needs m even: the two range projections have equal rank and must sum to
    the identity, which forces the dimension to be twice that rank.
    """
    if m % 2 != 0:
        raise ValueError(f"no such partial isometry exists in odd dimension {m}")
    half = m // 2
    out = np.zeros((m, m), dtype=np.complex128)
    for i in range(half):
        out[i, half + i] = 1.0
    return ComplexMatrix(out)


# ---------------------------------------------------------------------------
# Hermitian diagonalisation (cyclic complex Jacobi)
# ---------------------------------------------------------------------------


def hermitian_eig(a, tol=1e-13, max_sweeps=60):
    """Eigenvalues and an orthonormal eigenbasis of a Hermitian matrix.

    Cyclic Jacobi rotations; returns (values, vectors) with vectors[:, i]
    the eigenvector for values[i], sorted ascending.
    """
    arr = (a.data if isinstance(a, ComplexMatrix) else np.asarray(a, dtype=np.complex128)).copy()
    m = arr.shape[0]
    if np.max(np.abs(arr - arr.conj().T)) > 1e-10 * max(1.0, np.max(np.abs(arr))):
        raise ValueError("matrix is not Hermitian")
    arr = (arr + arr.conj().T) / 2
    v = np.eye(m, dtype=np.complex128)
    scale = max(1.0, float(np.max(np.abs(arr))))
    for _ in range(max_sweeps):
        off = 0.0
        for p in range(m - 1):
            for q in range(p + 1, m):
                off = max(off, abs(arr[p, q]))
        if off <= tol * scale:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                b = arr[p, q]
                r = abs(b)
                if r <= tol * scale / m:
                    continue
                phase = b / r
                app = arr[p, p].real
                aqq = arr[q, q].real
                theta = 0.5 * math.atan2(2 * r, app - aqq)
                c, s = math.cos(theta), math.sin(theta)
                pc = np.conj(phase)
                # unitary plane rotation: U[p,p]=c, U[p,q]=-s, U[q,p]=s*pc, U[q,q]=c*pc
                col_p = arr[:, p].copy()
                col_q = arr[:, q].copy()
                arr[:, p] = c * col_p + s * pc * col_q
                arr[:, q] = -s * col_p + c * pc * col_q
                row_p = arr[p, :].copy()
                row_q = arr[q, :].copy()
                arr[p, :] = c * row_p + s * phase * row_q
                arr[q, :] = -s * row_p + c * phase * row_q
                vp = v[:, p].copy()
                vq = v[:, q].copy()
                v[:, p] = c * vp + s * pc * vq
                v[:, q] = -s * vp + c * pc * vq
    else:
        raise NonConvergenceError(f"Jacobi sweeps did not converge within {max_sweeps} sweeps")
    values = np.real(np.diag(arr))
    order = np.argsort(values)
    return values[order], v[:, order]


def round_to_partial_isometry(b, defect_tol=1e-10):
    """Snap a near partial isometry with complementary ranges to an exact one.

    Requires both defect norms below 1/4.  Diagonalises b*b and bb*, rounds
    their spectra to {0, 1} (refusing when eigenvalues stray from the 0/1
    clusters), and rebuilds the isometric part of b between the rounded
    kernel and range.  In odd dimension the rounded ranks can never be
    complementary, which surfaces as ImpossibleInputError.
    """
    arr = b.data if isinstance(b, ComplexMatrix) else np.asarray(b, dtype=np.complex128)
    m = arr.shape[0]
    p = arr.conj().T @ arr
    q = arr @ arr.conj().T
    d1 = op_norm(ComplexMatrix(p - p @ p))
    d2 = op_norm(ComplexMatrix(p + q - np.eye(m)))
    if d1 >= 0.25 or d2 >= 0.25:
        raise ValueError(
            f"input is not close enough to a partial isometry: defects {d1:.4f}, {d2:.4f} (need < 0.25)"
        )
    lam, u = hermitian_eig(ComplexMatrix(p))
    mu, _ = hermitian_eig(ComplexMatrix(q))
    for spectrum, name in ((lam, "b*b"), (mu, "bb*")):
        for val in spectrum:
            if not (val < 1 / 3 or val > 2 / 3):
                raise RoundingUnstableError(
                    f"eigenvalue {val:.4f} of {name} sits between the 0 and 1 clusters"
                )
    rank_p = int(np.sum(lam > 0.5))
    rank_q = int(np.sum(mu > 0.5))
    if rank_p + rank_q != m:
        raise ImpossibleInputError(
            f"rounded ranks {rank_p} + {rank_q} != {m}: the two range projections "
            "cannot sum to the identity (impossible in odd dimension)"
        )
    u_range = u[:, lam > 0.5]  # rounded support of b*b
    u_kernel = u[:, lam <= 0.5]  # its orthocomplement, the rounded range of bb*
    c = u_kernel.conj().T @ arr @ u_range
    h = c.conj().T @ c
    s, w = hermitian_eig(ComplexMatrix(h))
    if np.any(s < 1e-8):
        raise RoundingUnstableError("compressed block is numerically singular; cannot take polar part")
    h_inv_sqrt = w @ np.diag(1.0 / np.sqrt(s)) @ w.conj().T
    polar = c @ h_inv_sqrt
    v = u_kernel @ polar @ u_range.conj().T
    out = ComplexMatrix(v)
    vv = out.data.conj().T @ out.data
    defect1 = op_norm(ComplexMatrix(vv - vv @ vv))
    defect2 = op_norm(ComplexMatrix(vv + out.data @ out.data.conj().T - np.eye(m)))
    if defect1 > defect_tol or defect2 > defect_tol:
        raise NonConvergenceError(
            f"rounding left defects {defect1:.2e}, {defect2:.2e} above {defect_tol:.0e}"
        )
    return out


def matrix_to_json(a):
    return {
        "m": a.m,
        "re": np.real(a.data).tolist(),
        "im": np.imag(a.data).tolist(),
    }


def matrix_from_json(obj):
    if isinstance(obj, str):
        obj = json.loads(obj)
    re = np.asarray(obj["re"], dtype=float)
    im = np.asarray(obj["im"], dtype=float)
    if re.shape != im.shape:
        raise ValueError("re and im parts must have the same shape")
    arr = re + 1j * im
    if arr.shape != (int(obj["m"]), int(obj["m"])):
        raise ValueError(f"declared size {obj['m']} does not match entries {arr.shape}")
    return ComplexMatrix(arr)
