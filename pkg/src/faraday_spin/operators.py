"""Second-quantized operators on the truncated photon-electron space.

The composite space is ``Fock(L) x Fock(R) x electron`` where the electron
factor is the four-level span ``{CU, VU, CD, VD}``.  Flat indices are laid out
with the electron index fastest, then ``n_R``, then ``n_L``::

    index = (n_L * (cutoff_R + 1) + n_R) * 4 + level

Photon ladder operators are exact on every basis state except the cutoff
boundary, where ``a^dagger`` maps ``|cutoff>`` to zero.  Commutator checks are
therefore only meaningful on the protected subspace returned by
:meth:`CompositeBasis.protected_mask`.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol

__all__ = [
    "ElectronLevel",
    "FockTruncation",
    "CompositeBasis",
    "OperatorMatrix",
    "build_annihilation",
    "build_creation",
    "build_number",
    "build_sigma",
    "identity",
    "commutator",
    "anticommutator",
    "expectation",
    "validate_density_matrix",
]


class ElectronLevel(enum.IntEnum):
    """The four single-electron levels, in basis order."""

    CU = 0  # |+1/2>, conduction, spin-up
    VU = 1  # |+3/2>, valence, spin-up
    CD = 2  # |-1/2>, conduction, spin-down
    VD = 3  # |-3/2>, valence, spin-down


ELECTRON_DIM = len(ElectronLevel)


@dataclass(frozen=True)
class FockTruncation:
    """Photon-number cutoff for one circular-polarization mode."""

    cutoff_per_mode: int

    def __post_init__(self):
        if int(self.cutoff_per_mode) != self.cutoff_per_mode or self.cutoff_per_mode < 1:
            raise ValueError(f"cutoff_per_mode must be an integer >= 1, got {self.cutoff_per_mode!r}")

    @property
    def dim(self) -> int:
        return self.cutoff_per_mode + 1

    def tail_weight(self, amplitude: complex) -> float:
        """Poisson weight of photon numbers above the cutoff for a coherent amplitude."""
        mean = abs(amplitude) ** 2
        if mean == 0.0:
            return 0.0
        # P(n <= cutoff) via the regularized upper incomplete gamma function.
        from scipy.special import gammaincc

        kept = gammaincc(self.cutoff_per_mode + 1, mean)
        return float(max(0.0, 1.0 - kept))

    def check_amplitude(self, amplitude: complex, tail_tol: float = tol.FOCK_TAIL_TOL) -> None:
        """Raise if the coherent amplitude leaks more than ``tail_tol`` past the cutoff."""
        tail = self.tail_weight(amplitude)
        if tail >= tail_tol:
            need = self.required_cutoff(amplitude, tail_tol)
            raise ValueError(
                f"coherent amplitude |nu|^2={abs(amplitude) ** 2:.6g} discards Poisson weight "
                f"{tail:.3e} >= {tail_tol:.1e} at cutoff {self.cutoff_per_mode}; "
                f"a cutoff of at least {need} is required"
            )

    @staticmethod
    def required_cutoff(amplitude: complex, tail_tol: float = tol.FOCK_TAIL_TOL) -> int:
        cutoff = 1
        while FockTruncation(cutoff).tail_weight(amplitude) >= tail_tol:
            cutoff += 1
        return cutoff


@dataclass(frozen=True)
class CompositeBasis:
    """Two truncated photon modes times the four-level electron."""

    fock_L: FockTruncation
    fock_R: FockTruncation
    max_dim: int = field(default=tol.MAX_COMPOSITE_DIM, compare=False)

    def __post_init__(self):
        if self.dim > self.max_dim:
            raise ValueError(
                f"composite dimension {self.dim} exceeds the cap {self.max_dim}; "
                "reduce the photon cutoff"
            )

    @classmethod
    def symmetric(cls, cutoff: int, max_dim: int = tol.MAX_COMPOSITE_DIM) -> CompositeBasis:
        return cls(FockTruncation(cutoff), FockTruncation(cutoff), max_dim=max_dim)

    @property
    def electron_dim(self) -> int:
        return ELECTRON_DIM

    @property
    def dim(self) -> int:
        return self.fock_L.dim * self.fock_R.dim * ELECTRON_DIM

    def index(self, n_L: int, n_R: int, level: ElectronLevel | int) -> int:
        if not (0 <= n_L < self.fock_L.dim and 0 <= n_R < self.fock_R.dim and 0 <= level < ELECTRON_DIM):
            raise IndexError(f"basis label ({n_L}, {n_R}, {level}) out of range")
        return (n_L * self.fock_R.dim + n_R) * ELECTRON_DIM + int(level)

    def label(self, index: int) -> tuple[int, int, ElectronLevel]:
        if not 0 <= index < self.dim:
            raise IndexError(f"flat index {index} out of range for dimension {self.dim}")
        rest, level = divmod(index, ELECTRON_DIM)
        n_L, n_R = divmod(rest, self.fock_R.dim)
        return n_L, n_R, ElectronLevel(level)

    def occupations(self) -> tuple[np.ndarray, np.ndarray]:
        """Arrays ``(n_L, n_R)`` giving the photon numbers of every flat index."""
        idx = np.arange(self.dim) // ELECTRON_DIM
        return idx // self.fock_R.dim, idx % self.fock_R.dim

    def protected_mask(self, max_occupation: int | None = None) -> np.ndarray:
        """Boolean mask of basis states with both occupations <= ``max_occupation``.

        The default, ``cutoff - 1`` for each mode, excludes the boundary row where
        the truncated ladder operators fail the canonical commutator.
        """
        n_L, n_R = self.occupations()
        lim_L = self.fock_L.cutoff_per_mode - 1 if max_occupation is None else max_occupation
        lim_R = self.fock_R.cutoff_per_mode - 1 if max_occupation is None else max_occupation
        return (n_L <= lim_L) & (n_R <= lim_R)

    def basis_vector(self, n_L: int, n_R: int, level: ElectronLevel | int) -> np.ndarray:
        v = np.zeros(self.dim, dtype=complex)
        v[self.index(n_L, n_R, level)] = 1.0
        return v

    def embed(self, photon_L=None, photon_R=None, electron=None) -> np.ndarray:
        """Kronecker product of per-factor matrices; ``None`` means identity."""
        mL = np.eye(self.fock_L.dim) if photon_L is None else np.asarray(photon_L)
        mR = np.eye(self.fock_R.dim) if photon_R is None else np.asarray(photon_R)
        me = np.eye(ELECTRON_DIM) if electron is None else np.asarray(electron)
        return np.kron(np.kron(mL, mR), me).astype(complex)


class OperatorMatrix:
    """Dense complex matrix with an optional, verified Hermiticity flag.

    Supports ``+``, ``-``, scalar ``*``, ``@`` and :meth:`dag`.  Results of
    arithmetic carry ``hermitian=False`` unless re-flagged explicitly.
    """

    __array_priority__ = 100

    def __init__(self, data, hermitian: bool = False, name: str = ""):
        data = np.asarray(data, dtype=complex)
        if data.ndim != 2 or data.shape[0] != data.shape[1]:
            raise ValueError(f"operator must be a square matrix, got shape {data.shape}")
        self.data = data
        self.name = name
        if hermitian and not is_hermitian(data):
            raise ValueError(f"operator {name or '<unnamed>'} flagged Hermitian but is not")
        self.hermitian = bool(hermitian)

    @property
    def dim(self) -> int:
        return self.data.shape[0]

    def dag(self) -> OperatorMatrix:
        return OperatorMatrix(self.data.conj().T, hermitian=self.hermitian, name=f"{self.name}^dag" if self.name else "")

    def __matmul__(self, other):
        return OperatorMatrix(self.data @ _raw(other))

    def __rmatmul__(self, other):
        return OperatorMatrix(_raw(other) @ self.data)

    def __add__(self, other):
        return OperatorMatrix(self.data + _raw(other))

    __radd__ = __add__

    def __sub__(self, other):
        return OperatorMatrix(self.data - _raw(other))

    def __rsub__(self, other):
        return OperatorMatrix(_raw(other) - self.data)

    def __neg__(self):
        return OperatorMatrix(-self.data, hermitian=self.hermitian)

    def __mul__(self, scalar):
        if not np.isscalar(scalar):
            return NotImplemented
        keep = self.hermitian and np.isreal(scalar)
        return OperatorMatrix(self.data * scalar, hermitian=keep)

    __rmul__ = __mul__

    def __array__(self, dtype=None, copy=None):
        return self.data if dtype is None else self.data.astype(dtype)

    def __repr__(self):
        tag = " hermitian" if self.hermitian else ""
        label = f" {self.name}" if self.name else ""
        return f"<OperatorMatrix{label} dim={self.dim}{tag}>"

    def as_hermitian(self, name: str = "") -> OperatorMatrix:
        """Return a copy flagged Hermitian (the flag is verified)."""
        return OperatorMatrix(self.data, hermitian=True, name=name or self.name)


def _raw(x) -> np.ndarray:
    return x.data if isinstance(x, OperatorMatrix) else np.asarray(x)


def is_hermitian(a, rtol: float = tol.HERMITIAN_RTOL) -> bool:
    a = _raw(a)
    scale = np.max(np.abs(a)) if a.size else 0.0
    if scale == 0.0:
        return True
    return bool(np.max(np.abs(a - a.conj().T)) < rtol * scale)


def single_mode_annihilation(dim: int) -> np.ndarray:
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), 1)


def build_annihilation(mode: str, basis: CompositeBasis) -> OperatorMatrix:
    """Photon annihilation operator ``a_L`` or ``a_R`` on the composite space."""
    mode = mode.upper()
    if mode == "L":
        return OperatorMatrix(basis.embed(photon_L=single_mode_annihilation(basis.fock_L.dim)), name="a_L")
    if mode == "R":
        return OperatorMatrix(basis.embed(photon_R=single_mode_annihilation(basis.fock_R.dim)), name="a_R")
    raise ValueError(f"mode must be 'L' or 'R', got {mode!r}")


def build_creation(mode: str, basis: CompositeBasis) -> OperatorMatrix:
    return build_annihilation(mode, basis).dag()


def build_number(mode: str, basis: CompositeBasis) -> OperatorMatrix:
    mode = mode.upper()
    if mode == "L":
        m = basis.embed(photon_L=np.diag(np.arange(basis.fock_L.dim, dtype=float)))
    elif mode == "R":
        m = basis.embed(photon_R=np.diag(np.arange(basis.fock_R.dim, dtype=float)))
    else:
        raise ValueError(f"mode must be 'L' or 'R', got {mode!r}")
    return OperatorMatrix(m, hermitian=True, name=f"n_{mode}")


def electron_block(kind: str) -> np.ndarray:
    L = ElectronLevel
    m = np.zeros((ELECTRON_DIM, ELECTRON_DIM), dtype=complex)
    if kind == "uz":
        m[L.CU, L.CU], m[L.VU, L.VU] = 1.0, -1.0
    elif kind == "dz":
        m[L.CD, L.CD], m[L.VD, L.VD] = 1.0, -1.0
    elif kind == "u+":
        m[L.CU, L.VU] = 1.0  # b_cu^dag b_vu : VU -> CU
    elif kind == "u-":
        m[L.VU, L.CU] = 1.0
    elif kind == "d+":
        m[L.CD, L.VD] = 1.0
    elif kind == "d-":
        m[L.VD, L.CD] = 1.0
    else:
        raise ValueError(f"unknown sigma kind {kind!r}; expected one of uz, dz, u+, u-, d+, d-")
    return m


SIGMA_KINDS = ("uz", "dz", "u+", "u-", "d+", "d-")


def build_sigma(kind: str, basis: CompositeBasis) -> OperatorMatrix:
    """Electron pseudo-spin bilinear embedded in the composite space.

    ``kind`` is one of ``uz, dz, u+, u-, d+, d-``.  Up-channel operators act on
    ``{CU, VU}`` and annihilate ``{CD, VD}``; down-channel operators mirror this.
    Unicode minus signs are accepted.
    """
    kind = kind.replace("−", "-")
    block = electron_block(kind)
    return OperatorMatrix(basis.embed(electron=block), hermitian=kind.endswith("z"), name=f"sigma_{kind}")


def identity(basis: CompositeBasis) -> OperatorMatrix:
    return OperatorMatrix(np.eye(basis.dim, dtype=complex), hermitian=True, name="I")


def _check_dims(A, B) -> tuple[np.ndarray, np.ndarray]:
    a, b = _raw(A), _raw(B)
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")
    return a, b


def commutator(A, B) -> OperatorMatrix:
    """``AB - BA``."""
    a, b = _check_dims(A, B)
    return OperatorMatrix(a @ b - b @ a)


def anticommutator(A, B) -> OperatorMatrix:
    """``AB + BA``."""
    a, b = _check_dims(A, B)
    return OperatorMatrix(a @ b + b @ a)


def validate_density_matrix(rho, dim: int | None = None) -> np.ndarray:
    """Check shape, unit trace, Hermiticity and positivity; return the array."""
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape[0] != rho.shape[1]:
        raise ValueError(f"density matrix must be square, got shape {rho.shape}")
    if dim is not None and rho.shape[0] != dim:
        raise ValueError(f"dimension mismatch: density matrix {rho.shape[0]} vs operator {dim}")
    tr = np.trace(rho)
    if abs(tr - 1.0) > tol.TRACE_ATOL:
        raise ValueError(f"density matrix is not normalized: trace = {tr}")
    if not is_hermitian(rho, rtol=1e-10):
        raise ValueError("density matrix is not Hermitian")
    lo = np.linalg.eigvalsh(rho).min()
    if lo < -tol.PSD_ATOL:
        raise ValueError(f"density matrix is not positive semidefinite: min eigenvalue {lo:.3e}")
    return rho


def expectation(A, rho, check: bool = True) -> complex:
    """``Tr(A rho)``.

    For an operator flagged Hermitian the imaginary part is checked to vanish and
    a real number is returned.  ``check=False`` skips the density-matrix
    validation (an eigendecomposition), which matters inside sweeps.
    """
    a = _raw(A)
    rho = np.asarray(rho, dtype=complex)
    if a.shape != rho.shape:
        raise ValueError(f"dimension mismatch: operator {a.shape} vs density matrix {rho.shape}")
    if check:
        validate_density_matrix(rho)
    # Tr(A rho) without forming the product.
    value = complex(np.einsum("ij,ji->", a, rho))
    if isinstance(A, OperatorMatrix) and A.hermitian:
        if abs(value.imag) > tol.IMAG_RTOL * (1.0 + abs(value)):
            raise ValueError(f"Hermitian expectation has imaginary part {value.imag:.3e}")
        return value.real
    return value


def max_abs(A) -> float:
    a = _raw(A)
    return float(np.max(np.abs(a))) if a.size else 0.0
