"""Separability of Bell diagonal states.

The criterion sum is ``S = sum_{I != 0} |Omega_I|``.  Separable states obey
``S <= 2**p - 1`` for every ``p``; at ``p = 1`` the bound ``S <= 1`` is also
sufficient, and :func:`build_decomposition` produces the explicit four-term
product ensemble that proves it.  The partial-transpose spectrum is computed
independently (closed form at ``p = 1``, Jacobi otherwise) as a cross-check.

Two different sign conventions appear below and are kept apart on purpose:
the *basis sign* ``(-1)**eps(I)`` from sigma_2 factors (see
:mod:`bellsep.bell_model`) and the *coefficient sign* ``sign(Omega_ii)`` used
when building local states.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from bellsep import bell_model as bm
from bellsep import tensor_core as tc
from bellsep.bell_model import OmegaDiagonal
from bellsep.errors import (
    CriterionViolatedError,
    InvalidArgumentError,
    NotAStateError,
    UnsupportedDimensionError,
)


class Verdict(str, Enum):
    ENTANGLED = "entangled"
    SEPARABLE = "separable"
    INCONCLUSIVE = "inconclusive"


class PptVerdict(str, Enum):
    PPT = "ppt"
    NPT = "npt"


# Term l of the two-qubit decomposition is
#   rho_l^A = (I + sum_i A_SIGNS[l][i] * sign(Omega_ii) * sqrt|Omega_ii| sigma_i) / 2
#   rho_l^B = (I + sum_i B_SIGNS[l][i] * sqrt|Omega_ii| sigma_i) / 2
# Column products sum to +4, -4, +4 for i = 1, 2, 3 (the basis sign of sigma_2),
# and every mixed column product sums to 0.
A_SIGNS = ((1, 1, 1), (-1, 1, -1), (1, -1, -1), (-1, -1, 1))
B_SIGNS = ((1, -1, 1), (-1, -1, -1), (1, 1, -1), (-1, 1, 1))


@dataclass(frozen=True)
class SeparableDecomposition:
    p: int
    weights: tuple
    local_a: tuple
    local_b: tuple

    def reconstruct(self) -> np.ndarray:
        return sum(w * np.kron(a, b) for w, a, b in zip(self.weights, self.local_a, self.local_b))


@dataclass(frozen=True)
class VerificationResult:
    """Outcome of :func:`verify_decomposition`; falsy when a check failed.

    ``reason`` is one of ``"weights"``, ``"positivity"``, ``"reconstruction"``
    or ``None`` on success.
    """

    ok: bool
    reason: Optional[str] = None
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class SeparabilityReport:
    p: int
    omega: OmegaDiagonal
    criterion_sum: float
    criterion_bound: float
    criterion_verdict: Verdict
    ppt_spectrum: tuple
    ppt_verdict: PptVerdict
    certificate: Optional[SeparableDecomposition]
    purity: float


def criterion_bound(p: int) -> float:
    return float(2 ** tc.check_qubits(p) - 1)


def criterion_sum(omega: OmegaDiagonal) -> float:
    """``S = sum |Omega_I|`` over the non-zero indices."""
    return math.fsum(abs(v) for v in omega.coeffs.values())


def require_state(omega: OmegaDiagonal) -> None:
    """Raise :class:`NotAStateError` (an invalid-argument error) unless ``omega`` realizes a PSD matrix.

    At ``p = 1`` the density-matrix eigenvalues are exactly the Bell weights,
    so the closed form is used; larger ``p`` goes through the eigensolver.
    """
    if omega.p == 1:
        worst = min(bm.bell_weights(omega))
    else:
        worst = bm.min_eigenvalue(omega)
    if worst < -tc.EIGEN_TOL:
        raise NotAStateError(f"coefficients do not describe a state (density eigenvalue {worst!r})", eigenvalue=worst)


def criterion_verdict(omega: OmegaDiagonal, tol: float = tc.BOUNDARY_TOL) -> Verdict:
    """Entangled when ``S`` exceeds ``2**p - 1`` by more than ``tol``.

    Below the bound the answer is separable for ``p = 1`` and inconclusive
    otherwise, since the bound is only known to be necessary there.
    """
    require_state(omega)
    return classify_sum(criterion_sum(omega), omega.p, tol)


def classify_sum(s: float, p: int, tol: float) -> Verdict:
    if s > criterion_bound(p) + tol:
        return Verdict.ENTANGLED
    return Verdict.SEPARABLE if p == 1 else Verdict.INCONCLUSIVE


def ppt_eigenvalues_closed_form(omega: OmegaDiagonal) -> tuple[float, float, float, float]:
    """Partial-transpose eigenvalues of a two-qubit Bell diagonal state.

    Ordered by the Bell vector each belongs to: Phi+, Phi-, Psi+, Psi-.
    """
    if omega.p != 1:
        raise UnsupportedDimensionError(f"closed-form PT spectrum needs p=1, got p={omega.p}")
    o1, o2, o3 = omega.triple()
    return (
        0.25 * (1.0 + o1 - o2 + o3),
        0.25 * (1.0 - o1 + o2 + o3),
        0.25 * (1.0 + o1 + o2 - o3),
        0.25 * (1.0 - o1 - o2 - o3),
    )


def ppt_spectrum(omega: OmegaDiagonal) -> np.ndarray:
    """Ascending eigenvalues of the partial transpose, computed numerically."""
    rho = bm.to_density_matrix(omega)
    return tc.hermitian_eigenvalues(tc.partial_transpose(rho, omega.p))


def ppt_verdict(omega: OmegaDiagonal, tol: float = tc.EIGEN_TOL) -> tuple[PptVerdict, np.ndarray]:
    spectrum = ppt_spectrum(omega)
    verdict = PptVerdict.PPT if spectrum[0] >= -tol else PptVerdict.NPT
    return verdict, spectrum


def local_eigenvalues_closed_form(s: float) -> tuple[float, float]:
    """Eigenvalues ``((1 + sqrt S) / 2, (1 - sqrt S) / 2)`` shared by all eight local factors."""
    if s < 0:
        raise InvalidArgumentError(f"criterion sum must be non-negative, got {s!r}")
    r = math.sqrt(s)
    return 0.5 * (1.0 + r), 0.5 * (1.0 - r)


def coefficient_sign(x: float) -> float:
    """``sign(x)`` with ``sign(0) = +1``; only used for local-state construction."""
    return -1.0 if x < 0 else 1.0


def build_decomposition(omega: OmegaDiagonal, tol: float = tc.CONSTRUCTION_TOL) -> SeparableDecomposition:
    """Explicit separable ensemble ``rho = 1/4 sum_l rho_l^A (x) rho_l^B`` for ``S <= 1 + tol``.

    Raises:
        UnsupportedDimensionError: ``p != 1``.
        CriterionViolatedError: ``S > 1``; the local factors would have a
            negative eigenvalue ``(1 - sqrt S) / 2``.
    """
    if omega.p != 1:
        raise UnsupportedDimensionError(f"explicit decomposition is only available at p=1, got p={omega.p}")
    s = criterion_sum(omega)
    if s > 1.0 + tol:
        raise CriterionViolatedError(f"criterion sum S={s!r} exceeds 1; no product decomposition of this form")
    omegas = omega.triple()
    amps = [math.sqrt(abs(v)) for v in omegas]
    csigns = [coefficient_sign(v) for v in omegas]
    paulis = [tc.pauli_matrix(i) for i in range(4)]

    def local(signs):
        out = paulis[0].copy()
        for i in range(3):
            out = out + signs[i] * amps[i] * paulis[i + 1]
        return 0.5 * out

    local_a = tuple(local([sa[i] * csigns[i] for i in range(3)]) for sa in A_SIGNS)
    local_b = tuple(local(sb) for sb in B_SIGNS)
    return SeparableDecomposition(p=1, weights=(0.25,) * 4, local_a=local_a, local_b=local_b)


def verify_decomposition(
    decomposition: SeparableDecomposition,
    omega: OmegaDiagonal,
    tol: float = tc.CONSTRUCTION_TOL,
    psd_tol: float = tc.EIGEN_TOL,
) -> VerificationResult:
    """Check convex weights, valid local states, and reconstruction of ``omega``."""
    weights = np.asarray(decomposition.weights, dtype=float)
    if weights.ndim != 1 or len(weights) == 0:
        return VerificationResult(False, "weights", "empty weight list")
    if len(decomposition.local_a) != len(weights) or len(decomposition.local_b) != len(weights):
        return VerificationResult(False, "weights", "weight and factor counts differ")
    if weights.min() < -tol or abs(weights.sum() - 1.0) > tol:
        return VerificationResult(False, "weights", f"weights {weights.tolist()} are not convex")

    for label, factors in (("A", decomposition.local_a), ("B", decomposition.local_b)):
        for k, m in enumerate(factors):
            m = np.asarray(m, dtype=complex)
            if m.shape != (2**decomposition.p, 2**decomposition.p):
                return VerificationResult(False, "positivity", f"{label}{k} has shape {m.shape}")
            if tc.hermiticity_error(m) > tol:
                return VerificationResult(False, "positivity", f"{label}{k} is not Hermitian")
            if abs(np.trace(m) - 1.0) > tol:
                return VerificationResult(False, "positivity", f"{label}{k} has trace {np.trace(m)!r}")
            low = tc.hermitian_eigenvalues(m)[0]
            if low < -psd_tol:
                return VerificationResult(False, "positivity", f"{label}{k} has eigenvalue {low!r}")

    if decomposition.p != omega.p:
        return VerificationResult(False, "reconstruction", "qubit counts differ")
    err = float(np.max(np.abs(decomposition.reconstruct() - bm.to_density_matrix(omega))))
    if err > tol:
        return VerificationResult(False, "reconstruction", f"max reconstruction error {err:.3e}")
    return VerificationResult(True)


def pauli_diagonal_sum(rho: np.ndarray, p: int) -> float:
    """``sum_I |trace(rho @ sigma_I (x) sigma_I)|`` including the identity term.

    At most ``2**p`` for every separable ``rho``.
    """
    return math.fsum(np.abs(bm.diagonal_traces(rho, p)))


def analyze(omega: OmegaDiagonal, tol: float = tc.BOUNDARY_TOL) -> SeparabilityReport:
    """Run the criterion, the PPT test, and (when separable) build a certificate.

    The PPT test uses ``tol / 4``: at ``p = 1`` the smallest PT eigenvalue of
    an entangled state is ``(1 - S) / 4``, so both verdicts switch at the same
    point.  A certificate is attached only when ``S <= 1 + 1e-12``; inside the
    tolerance band above that no exact product ensemble exists, so a
    separable verdict there comes without one.
    """
    require_state(omega)
    s = criterion_sum(omega)
    verdict = classify_sum(s, omega.p, tol)
    pverdict, spectrum = ppt_verdict(omega, tol / 4.0)
    certificate = None
    if verdict is Verdict.SEPARABLE and s <= 1.0 + tc.CONSTRUCTION_TOL:
        certificate = build_decomposition(omega)
    return SeparabilityReport(
        p=omega.p,
        omega=omega,
        criterion_sum=s,
        criterion_bound=criterion_bound(omega.p),
        criterion_verdict=verdict,
        ppt_spectrum=tuple(float(x) for x in spectrum),
        ppt_verdict=pverdict,
        certificate=certificate,
        purity=bm.purity(omega),
    )
