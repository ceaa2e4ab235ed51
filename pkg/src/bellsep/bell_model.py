"""Bell diagonal states in the Omega-coefficient representation.

A Bell diagonal state on ``p`` qubits per party is

    rho = 4**-p * (I + sum_{I != 0} (-1)**eps(I) * Omega_I * sigma_I (x) sigma_I)

with ``eps(I)`` the number of sigma_2 factors in ``I``.  That sign is handled
here in both directions (realization and extraction), so ``Omega_I`` is the
same number a user writes down.  For ``p = 1`` the state is equivalently a
mixture of the four Bell vectors with weights ``lambda`` in the order
(Phi+, Phi-, Psi+, Psi-).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Mapping, Sequence

import numpy as np

from bellsep import tensor_core as tc
from bellsep.errors import InvalidArgumentError, NotAStateError, UnsupportedDimensionError

# slack on |Omega_I| <= 1 so float round-off from sampling is not rejected
_OMEGA_BOUND_SLACK = 1e-12
_LAMBDA_NEG_TOL = 1e-12
_LAMBDA_SUM_TOL = 1e-10


@dataclass(frozen=True)
class OmegaDiagonal:
    """Diagonal Pauli coefficients of a Bell diagonal state.

    ``coeffs`` maps non-zero multi-indices to ``Omega_I``.  The all-zero index
    is implicitly 1 and must not be given; absent indices are 0.  Positivity is
    not enforced, so non-states can be represented and rejected by
    :func:`validate`.
    """

    p: int
    coeffs: Mapping[tuple, float] = field(default_factory=dict)

    def __post_init__(self):
        p = tc.check_qubits(self.p)
        clean = {}
        for key, value in dict(self.coeffs).items():
            idx = tc.check_index(key, p)
            if not any(idx):
                raise InvalidArgumentError("the all-zero index is fixed to 1 and cannot be stored")
            if idx in clean:
                raise InvalidArgumentError(f"duplicate multi-index {idx}")
            v = float(value) + 0.0  # drop negative zero
            if not np.isfinite(v) or abs(v) > 1.0 + _OMEGA_BOUND_SLACK:
                raise InvalidArgumentError(f"|Omega_{idx}| = {abs(v)!r} exceeds 1")
            clean[idx] = v
        ordered = {idx: clean[idx] for idx in sorted(clean)}
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "coeffs", MappingProxyType(ordered))

    @classmethod
    def from_triple(cls, o11: float, o22: float, o33: float) -> "OmegaDiagonal":
        """Two-qubit state from ``(Omega_11, Omega_22, Omega_33)``."""
        return cls(1, {(1,): o11, (2,): o22, (3,): o33})

    @classmethod
    def from_vector(cls, p: int, vector: Sequence[float]) -> "OmegaDiagonal":
        """Inverse of :meth:`vector`; entry 0 must be 1."""
        vec = np.asarray(vector, dtype=float)
        if vec.shape != (4**p,):
            raise InvalidArgumentError(f"expected {4**p} coefficients, got shape {vec.shape}")
        if abs(vec[0] - 1.0) > tc.CONSTRUCTION_TOL:
            raise InvalidArgumentError(f"identity coefficient must be 1, got {vec[0]!r}")
        indices = tc.multi_indices(p)
        return cls(p, {indices[k]: float(vec[k]) for k in range(1, len(indices))})

    def __getitem__(self, index) -> float:
        idx = tc.check_index(index, self.p)
        if not any(idx):
            return 1.0
        return self.coeffs.get(idx, 0.0)

    def vector(self) -> np.ndarray:
        """Dense coefficients over all ``4**p`` indices in canonical order, entry 0 equal to 1."""
        out = np.zeros(4**self.p)
        out[0] = 1.0
        pos = {idx: k for k, idx in enumerate(tc.multi_indices(self.p))}
        for idx, v in self.coeffs.items():
            out[pos[idx]] = v
        return out

    def triple(self) -> tuple[float, float, float]:
        _require_p1(self.p)
        return (self[(1,)], self[(2,)], self[(3,)])

    def scaled(self, t: float) -> "OmegaDiagonal":
        return OmegaDiagonal(self.p, {k: t * v for k, v in self.coeffs.items()})


@dataclass(frozen=True)
class BellSpectrum:
    """Weights of the Bell projectors; at p=1 ordered (Phi+, Phi-, Psi+, Psi-)."""

    p: int
    lambdas: tuple

    def __post_init__(self):
        p = tc.check_qubits(self.p)
        lam = tuple(float(x) for x in self.lambdas)
        if len(lam) != 4**p:
            raise InvalidArgumentError(f"expected {4**p} weights for p={p}, got {len(lam)}")
        if min(lam) < -_LAMBDA_NEG_TOL:
            raise NotAStateError(f"negative Bell weight {min(lam)!r}", eigenvalue=min(lam))
        if abs(sum(lam) - 1.0) > _LAMBDA_SUM_TOL:
            raise InvalidArgumentError(f"Bell weights sum to {sum(lam)!r}, not 1")
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "lambdas", lam)


def _require_p1(p: int) -> None:
    if p != 1:
        raise UnsupportedDimensionError(f"only defined for p=1, got p={p}")


def bell_vectors() -> np.ndarray:
    """Rows are |Phi+>, |Phi->, |Psi+>, |Psi->> in the computational basis."""
    r = 1.0 / np.sqrt(2.0)
    return np.array(
        [
            [r, 0, 0, r],
            [r, 0, 0, -r],
            [0, r, r, 0],
            [0, r, -r, 0],
        ],
        dtype=complex,
    )


def omega_from_lambdas(spectrum: BellSpectrum) -> OmegaDiagonal:
    _require_p1(spectrum.p)
    l1, l2, l3, l4 = spectrum.lambdas
    return OmegaDiagonal.from_triple(
        2.0 * (l1 + l3) - 1.0,
        2.0 * (l1 + l4) - 1.0,
        2.0 * (l1 + l2) - 1.0,
    )


def bell_weights(omega: OmegaDiagonal) -> tuple[float, float, float, float]:
    """Unchecked Bell weights (Phi+, Phi-, Psi+, Psi-) of two-qubit coefficients."""
    o1, o2, o3 = omega.triple()
    return (
        0.25 * (1.0 + o1 + o2 + o3),
        0.25 * (1.0 - o1 - o2 + o3),
        0.25 * (1.0 + o1 - o2 - o3),
        0.25 * (1.0 - o1 + o2 - o3),
    )


def lambdas_from_omega(omega: OmegaDiagonal) -> BellSpectrum:
    """Bell weights of a two-qubit state; raises :class:`NotAStateError` outside the tetrahedron."""
    lam = bell_weights(omega)
    worst = min(lam)
    if worst < -_LAMBDA_NEG_TOL:
        raise NotAStateError(
            f"Omega={omega.triple()} lies outside the Bell tetrahedron (weight {worst!r})",
            eigenvalue=worst,
        )
    return BellSpectrum(1, lam)


def basis_signs(p: int) -> np.ndarray:
    """``(-1)**eps(I)`` for every index in canonical order (eps counts sigma_2 factors)."""
    return np.array([(-1.0) ** tc.basis_sign_exponent(idx) for idx in tc.multi_indices(p)])


def to_density_matrix(omega: OmegaDiagonal) -> np.ndarray:
    p = omega.p
    diag = basis_signs(p) * omega.vector()
    coeffs = np.diag(diag.astype(complex))
    rho = tc.from_pauli_coefficients(coeffs, 2 * p)
    return 0.5 * (rho + rho.conj().T)


def full_coefficients(rho: np.ndarray, p: int) -> np.ndarray:
    """Matrix ``C[I, J] = trace(rho @ sigma_I (x) sigma_J)`` over all index pairs (complex)."""
    return tc.pauli_coefficients(rho, 2 * p).reshape(4**p, 4**p)


def diagonal_traces(rho: np.ndarray, p: int) -> np.ndarray:
    """Real parts of ``trace(rho @ sigma_I (x) sigma_I)`` for every index ``I``, canonical order."""
    return np.diag(full_coefficients(rho, p)).real.copy()


def omega_from_density(rho: np.ndarray, p: int) -> tuple[OmegaDiagonal, float]:
    """Extract ``Omega`` and the largest cross coefficient ``|trace(rho sigma_I (x) sigma_J)|``, I != J.

    A non-zero residual means ``rho`` is not Bell diagonal; the returned Omega
    is then only its diagonal projection.
    """
    p = tc.check_qubits(p)
    rho = np.asarray(rho, dtype=complex)
    if rho.ndim != 2 or rho.shape != (4**p, 4**p):
        raise InvalidArgumentError(f"rho has shape {rho.shape}, expected {(4**p, 4**p)} for p={p}")
    coeffs = full_coefficients(rho, p)
    values = basis_signs(p) * np.diag(coeffs).real
    np.fill_diagonal(coeffs, 0.0)
    residual = float(np.max(np.abs(coeffs))) if coeffs.size > 1 else 0.0
    return OmegaDiagonal.from_vector(p, values), residual


def validate(omega: OmegaDiagonal) -> bool:
    """True iff the realized density matrix is positive semidefinite within 1e-10."""
    return tc.is_psd(to_density_matrix(omega), tc.EIGEN_TOL)


def min_eigenvalue(omega: OmegaDiagonal) -> float:
    return float(tc.hermitian_eigenvalues(to_density_matrix(omega))[0])


def purity(omega: OmegaDiagonal) -> float:
    """``trace(rho**2) = 4**-p * (1 + sum Omega_I**2)``."""
    total = 1.0 + sum(v * v for v in omega.coeffs.values())
    return total / 4**omega.p
