"""Tensor-product operator algebra for two truncated bosonic modes and one
two-level system.

The state space is a fixed-order tensor product

    CW mode (n_max_cw + 1 levels)  x  CCW mode (n_max_ccw + 1 levels)  x  QD (2 levels)

with total dimension d = (n_max_cw + 1) * (n_max_ccw + 1) * 2.  The QD basis
ordering is index 0 = ground, index 1 = excited, so sigma_z = diag(-1, +1)
and [sigma_+, sigma_-] = sigma_z.

Matrices are dense below d = 64 and sparse (CSR) at or above it; the two
representations are semantically identical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

CW = "cw"
CCW = "ccw"

# Representation switch: dense below this total dimension, sparse above.
DENSE_LIMIT = 64


@dataclass(frozen=True)
class HilbertSpace:
    """Truncated product space for the two cavity modes and the QD.

    Parameters
    ----------
    n_max_cw, n_max_ccw : int
        Maximum photon number kept in each traveling-wave mode (>= 1).
        Each mode then has n_max + 1 Fock levels.
    """

    n_max_cw: int
    n_max_ccw: int

    def __post_init__(self):
        if self.n_max_cw < 1 or self.n_max_ccw < 1:
            raise ValueError("photon truncation n_max must be >= 1 per mode")

    @property
    def dims(self) -> tuple[int, int, int]:
        """Per-factor dimensions in the fixed order (CW, CCW, QD)."""
        return (self.n_max_cw + 1, self.n_max_ccw + 1, 2)

    @property
    def dim(self) -> int:
        d1, d2, d3 = self.dims
        return d1 * d2 * d3

    def index(self, n_cw: int, n_ccw: int, excited: bool) -> int:
        """Flat basis index of |n_cw, n_ccw, g/e> under the fixed ordering."""
        d1, d2, d3 = self.dims
        if not (0 <= n_cw < d1 and 0 <= n_ccw < d2):
            raise ValueError("Fock label outside truncation")
        return (n_cw * d2 + n_ccw) * d3 + int(excited)


def _use_sparse(space: HilbertSpace) -> bool:
    return space.dim >= DENSE_LIMIT


def _embed(space: HilbertSpace, factor_mats) -> "np.ndarray | sp.csr_matrix":
    """Kronecker product of the three single-factor matrices, respecting the
    dense/sparse representation policy."""
    if _use_sparse(space):
        out = sp.csr_matrix(np.asarray(factor_mats[0], dtype=complex))
        for m in factor_mats[1:]:
            out = sp.kron(out, sp.csr_matrix(np.asarray(m, dtype=complex)), format="csr")
        return out
    out = np.asarray(factor_mats[0], dtype=complex)
    for m in factor_mats[1:]:
        out = np.kron(out, np.asarray(m, dtype=complex))
    return out


class Operator:
    """A complex matrix tagged with the HilbertSpace it acts on.

    Supports +, -, scalar *, @ (composition) and dagger(); dagger is an exact
    involution.  Whether ``matrix`` is dense or sparse is an implementation
    detail chosen per dimension.
    """

    __slots__ = ("space", "matrix")

    def __init__(self, space: HilbertSpace, matrix):
        d = space.dim
        if matrix.shape != (d, d):
            raise ValueError(f"matrix shape {matrix.shape} does not match space dim {d}")
        object.__setattr__(self, "space", space)
        object.__setattr__(self, "matrix", matrix)

    def dagger(self) -> "Operator":
        m = self.matrix
        if sp.issparse(m):
            return Operator(self.space, m.conj().T.tocsr())
        return Operator(self.space, m.conj().T)

    def to_dense(self) -> np.ndarray:
        m = self.matrix
        return m.toarray() if sp.issparse(m) else np.asarray(m)

    def _check(self, other: "Operator"):
        if self.space != other.space:
            raise ValueError("operators act on different Hilbert spaces")

    def __matmul__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix @ other.matrix)

    def __add__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix + other.matrix)

    def __sub__(self, other: "Operator") -> "Operator":
        self._check(other)
        return Operator(self.space, self.matrix - other.matrix)

    def __mul__(self, scalar) -> "Operator":
        return Operator(self.space, self.matrix * complex(scalar))

    __rmul__ = __mul__

    def __neg__(self) -> "Operator":
        return Operator(self.space, -self.matrix)


class DensityMatrix:
    """System state rho on a HilbertSpace.

    Physical states are validated on construction: Hermitian within `atol`
    (default 1e-10), unit trace within `atol`, and smallest eigenvalue
    >= -1e-8.  Quantum-regression seeds are not states; they are constructed
    with ``physical=False`` and skip validation (the flag is kept so
    downstream code can tell them apart).
    """

    __slots__ = ("space", "matrix", "physical")

    def __init__(self, space: HilbertSpace, matrix, physical: bool = True,
                 atol: float = 1e-10, check_positivity: bool = True):
        matrix = np.asarray(matrix, dtype=complex)
        d = space.dim
        if matrix.shape != (d, d):
            raise ValueError(f"matrix shape {matrix.shape} does not match space dim {d}")
        if physical:
            herm = np.abs(matrix - matrix.conj().T).max()
            if herm > atol:
                raise ValueError(f"density matrix not Hermitian: |rho - rho^dag|_max = {herm:.3e}")
            tr = matrix.trace()
            if abs(tr - 1.0) > atol:
                raise ValueError(f"density matrix trace {tr} != 1")
            if check_positivity:
                lo = np.linalg.eigvalsh(matrix).min()
                if lo < -1e-8:
                    raise ValueError(f"density matrix has negative eigenvalue {lo:.3e}")
        self.space = space
        self.matrix = matrix
        self.physical = physical

    @property
    def trace(self) -> complex:
        return complex(self.matrix.trace())


def _single_mode_lowering(n_levels: int) -> np.ndarray:
    """Truncated ladder operator, a[n-1, n] = sqrt(n)."""
    a = np.zeros((n_levels, n_levels), dtype=complex)
    for n in range(1, n_levels):
        a[n - 1, n] = np.sqrt(n)
    return a


def annihilation(space: HilbertSpace, which_mode: str) -> Operator:
    """Annihilation operator for one traveling-wave mode, embedded in the
    full space (a x 1 x 1 for CW, 1 x a x 1 for CCW).

    On the subspace excluding the top Fock level it satisfies [a, a^dag] = 1.
    """
    d1, d2, _ = space.dims
    eye_cw = np.eye(d1)
    eye_ccw = np.eye(d2)
    eye_qd = np.eye(2)
    if which_mode == CW:
        mats = (_single_mode_lowering(d1), eye_ccw, eye_qd)
    elif which_mode == CCW:
        mats = (eye_cw, _single_mode_lowering(d2), eye_qd)
    else:
        raise ValueError(f"which_mode must be '{CW}' or '{CCW}', got {which_mode!r}")
    return Operator(space, _embed(space, mats))


def number(space: HilbertSpace, which_mode: str) -> Operator:
    """Photon-number operator a^dag a for one traveling-wave mode."""
    a = annihilation(space, which_mode)
    return a.dagger() @ a


def qd_lowering(space: HilbertSpace) -> Operator:
    """QD lowering operator sigma_- = |g><e| embedded as 1 x 1 x sigma_-.

    Satisfies sigma_-^2 = 0 and [sigma_+, sigma_-] = sigma_z exactly.
    """
    d1, d2, _ = space.dims
    sm = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=complex)  # |g><e|, ground = index 0
    return Operator(space, _embed(space, (np.eye(d1), np.eye(d2), sm)))


def qd_sigma_z(space: HilbertSpace) -> Operator:
    """sigma_z = diag(-1, +1) on the QD factor (ground = -1, excited = +1)."""
    d1, d2, _ = space.dims
    sz = np.diag([-1.0, 1.0]).astype(complex)
    return Operator(space, _embed(space, (np.eye(d1), np.eye(d2), sz)))


def identity(space: HilbertSpace) -> Operator:
    if _use_sparse(space):
        return Operator(space, sp.identity(space.dim, dtype=complex, format="csr"))
    return Operator(space, np.eye(space.dim, dtype=complex))


def expectation(rho: DensityMatrix, A: Operator) -> complex:
    """Tr[A rho].

    Real within 1e-10 when A is Hermitian and rho physical; the complex value
    is returned unchanged so callers can check that themselves.
    """
    if rho.space != A.space:
        raise ValueError("dimension mismatch: state and operator live on different spaces")
    m = A.matrix
    if sp.issparse(m):
        return complex(m.multiply(rho.matrix.T).sum())
    return complex((m * rho.matrix.T).sum())


def standing_wave_ops(space: HilbertSpace, xi: float) -> tuple[Operator, Operator]:
    """Standing-wave mode operators for backscattering phase xi:

        a_SW1 = (a_CW + e^{i xi} a_CCW) / sqrt(2)
        a_SW2 = (a_CW - e^{i xi} a_CCW) / sqrt(2)

    The pair conserves the total photon number exactly:
    a_SW1^dag a_SW1 + a_SW2^dag a_SW2 = a_CW^dag a_CW + a_CCW^dag a_CCW.
    """
    a_cw = annihilation(space, CW)
    a_ccw = annihilation(space, CCW)
    phase = complex(np.exp(1j * xi))
    inv_sqrt2 = 1.0 / np.sqrt(2.0)
    a_sw1 = inv_sqrt2 * (a_cw + phase * a_ccw)
    a_sw2 = inv_sqrt2 * (a_cw - phase * a_ccw)
    return a_sw1, a_sw2


def fock_state(space: HilbertSpace, n_cw: int, n_ccw: int, excited: bool = False) -> DensityMatrix:
    """Pure product Fock state |n_cw, n_ccw, g/e><...| as a density matrix."""
    d = space.dim
    rho = np.zeros((d, d), dtype=complex)
    i = space.index(n_cw, n_ccw, excited)
    rho[i, i] = 1.0
    return DensityMatrix(space, rho)


def vacuum_state(space: HilbertSpace) -> DensityMatrix:
    """Both modes in vacuum, QD in the ground state."""
    return fock_state(space, 0, 0, excited=False)
