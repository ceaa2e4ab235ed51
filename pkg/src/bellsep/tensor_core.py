"""Dense complex linear algebra on the Pauli tensor basis.

Matrices are plain ``numpy`` complex arrays of shape ``(dim, dim)``.  A
bipartite operator on ``p`` qubits per party has ``dim = 4**p`` and uses
A-major row ordering: row index ``a * 2**p + b`` where ``a`` labels the
A-party basis vector and ``b`` the B-party one.  Every module in the package
relies on this convention.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Sequence, Tuple

import numpy as np

from bellsep.errors import InvalidArgumentError, NumericFailureError

MAX_QUBITS = 6

# tolerance ladder
CONSTRUCTION_TOL = 1e-12
EIGEN_TOL = 1e-10
BOUNDARY_TOL = 1e-9

JACOBI_TOL = 1e-14
JACOBI_MAX_SWEEPS = 100

MultiIndex = Tuple[int, ...]

_PAULIS = (
    np.array([[1, 0], [0, 1]], dtype=complex),
    np.array([[0, 1], [1, 0]], dtype=complex),
    np.array([[0, -1j], [1j, 0]], dtype=complex),
    np.array([[1, 0], [0, -1]], dtype=complex),
)
for _m in _PAULIS:
    _m.setflags(write=False)


def pauli_matrix(i: int) -> np.ndarray:
    """Return sigma_i; ``0`` is the identity, ``1..3`` are X, Y, Z."""
    if isinstance(i, bool) or not isinstance(i, (int, np.integer)) or not 0 <= i <= 3:
        raise InvalidArgumentError(f"Pauli index must be one of 0, 1, 2, 3; got {i!r}")
    return _PAULIS[int(i)].copy()


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product with ``out[a1*nb + b1, a2*nb + b2] = a[a1, a2] * b[b1, b2]``."""
    a = _as_square(a)
    b = _as_square(b)
    return np.kron(a, b)


def check_qubits(p: int) -> int:
    if isinstance(p, bool) or not isinstance(p, (int, np.integer)):
        raise InvalidArgumentError(f"qubit count must be an integer; got {p!r}")
    if not 1 <= p <= MAX_QUBITS:
        raise InvalidArgumentError(f"qubit count must lie in 1..{MAX_QUBITS}; got {p}")
    return int(p)


def check_index(index: Sequence[int], p: int | None = None) -> MultiIndex:
    """Validate a Pauli multi-index and return it as a tuple of ints."""
    try:
        digits = tuple(int(d) for d in index)
    except (TypeError, ValueError):
        raise InvalidArgumentError(f"multi-index must be a sequence of digits; got {index!r}") from None
    if not 1 <= len(digits) <= MAX_QUBITS:
        raise InvalidArgumentError(f"multi-index length must lie in 1..{MAX_QUBITS}; got {len(digits)}")
    if any(d not in (0, 1, 2, 3) for d in digits):
        raise InvalidArgumentError(f"multi-index digits must be in 0..3; got {index!r}")
    if p is not None and len(digits) != p:
        raise InvalidArgumentError(f"multi-index {digits} does not have length p={p}")
    return digits


@lru_cache(maxsize=None)
def multi_indices(p: int) -> Tuple[MultiIndex, ...]:
    """All ``4**p`` multi-indices in lexicographic order; the all-zero index comes first."""
    p = check_qubits(p)
    return tuple(itertools.product(range(4), repeat=p))


def basis_sign_exponent(index: Sequence[int]) -> int:
    """Number of sigma_2 factors in the index.

    Transposition flips the sign of sigma_2 only, so ``(-1)**exponent`` is the
    sign relating ``sigma_I`` to its complex conjugate.
    """
    return sum(1 for d in index if d == 2)


@lru_cache(maxsize=None)
def _pauli_tensor_cached(index: MultiIndex) -> np.ndarray:
    out = _PAULIS[index[0]]
    for d in index[1:]:
        out = np.kron(out, _PAULIS[d])
    out = np.array(out, dtype=complex)
    out.setflags(write=False)
    return out


def pauli_tensor(index: Sequence[int]) -> np.ndarray:
    """sigma_{i1} (x) ... (x) sigma_{ip} as a ``2**p`` square matrix."""
    return _pauli_tensor_cached(check_index(index)).copy()


@lru_cache(maxsize=None)
def pauli_stack(p: int) -> np.ndarray:
    """Read-only array of shape ``(4**p, 2**p, 2**p)`` holding every sigma_I in canonical order."""
    stack = np.stack([_pauli_tensor_cached(idx) for idx in multi_indices(p)])
    stack.setflags(write=False)
    return stack


def qubits_for_bipartite_dim(dim: int) -> int:
    """Return ``p`` with ``dim == 4**p``, or raise."""
    p = 0
    d = int(dim)
    while d > 1 and d % 4 == 0:
        d //= 4
        p += 1
    if d != 1 or p == 0:
        raise InvalidArgumentError(f"dimension {dim} is not 4**p for any p >= 1")
    return check_qubits(p)


def hs_coefficient(rho: np.ndarray, i: Sequence[int], j: Sequence[int]) -> tuple[float, float]:
    """Return ``trace(rho @ (sigma_I (x) sigma_J))`` as ``(real_part, abs(imag_part))``.

    For ``rho = 4**-p * sum c_IJ sigma_I (x) sigma_J`` the real part is ``c_IJ``.
    The imaginary residual vanishes for Hermitian input and is returned so
    callers can check that.
    """
    rho = _as_square(rho)
    i = check_index(i)
    j = check_index(j, len(i))
    p = len(i)
    if rho.shape[0] != 4**p:
        raise InvalidArgumentError(f"rho has dimension {rho.shape[0]}, expected {4**p} for p={p}")
    op = np.kron(_pauli_tensor_cached(i), _pauli_tensor_cached(j))
    # trace(rho @ op) without forming the product
    value = np.sum(rho * op.T)
    return float(value.real), float(abs(value.imag))


def pauli_coefficients(m: np.ndarray, n_qubits: int) -> np.ndarray:
    """All ``trace(m @ sigma_K)`` for ``K`` over ``4**n_qubits`` multi-indices, canonical order.

    Works one qubit at a time, so the cost is ``O(n 4**n)`` instead of one
    dense trace per basis element.  For a bipartite operator with ``p`` qubits
    per party, reshaping the result to ``(4**p, 4**p)`` gives
    ``C[I, J] = trace(m @ sigma_I (x) sigma_J)``.
    """
    n = int(n_qubits)
    m = _as_square(m)
    if m.shape[0] != 2**n:
        raise InvalidArgumentError(f"matrix dimension {m.shape[0]} is not 2**{n}")
    # paulis_ct[k, c, r] = sigma_k[c, r]; contracting against t[r, c] gives trace(block @ sigma_k)
    paulis_ct = np.stack(_PAULIS)
    t = m.reshape((2,) * (2 * n))
    for step in range(n):
        t = np.tensordot(t, paulis_ct, axes=([0, n - step], [2, 1]))
    return t.reshape(-1)


def from_pauli_coefficients(coeffs: np.ndarray, n_qubits: int) -> np.ndarray:
    """Inverse of :func:`pauli_coefficients`: ``2**-n * sum_K coeffs[K] sigma_K``."""
    n = int(n_qubits)
    c = np.asarray(coeffs, dtype=complex).reshape((4,) * n)
    paulis = np.stack(_PAULIS)
    t = c
    for _ in range(n):
        # consume the leading Pauli axis, append its (row, col) pair
        t = np.tensordot(t, paulis, axes=([0], [0]))
    # axes are now r0, c0, r1, c1, ...; regroup rows before columns
    order = [2 * k for k in range(n)] + [2 * k + 1 for k in range(n)]
    return t.transpose(order).reshape(2**n, 2**n) / 2**n


def hermiticity_error(m: np.ndarray) -> float:
    m = _as_square(m)
    return float(np.max(np.abs(m - m.conj().T)))


def hermitian_eigenvalues(m: np.ndarray, tol: float = JACOBI_TOL) -> np.ndarray:
    """Ascending eigenvalues of a Hermitian matrix by cyclic complex Jacobi rotations.

    Each rotation first removes the phase of ``a[p, q]`` and then applies the
    real symmetric Jacobi rotation that annihilates it.  A sweep visits every
    pair once in round-robin order, so the ``n // 2`` rotations of one step act
    on disjoint planes and are applied together.  Sweeps repeat until every
    off-diagonal magnitude drops below ``tol``; the threshold is floored at
    machine precision times the Frobenius norm so large inputs can converge.

    Raises:
        InvalidArgumentError: ``m`` deviates from Hermitian by more than 1e-10.
        NumericFailureError: no convergence within 100 sweeps.
    """
    a = np.array(_as_square(m), dtype=complex)
    herm_err = float(np.max(np.abs(a - a.conj().T)))
    if herm_err > EIGEN_TOL:
        raise InvalidArgumentError(f"matrix is not Hermitian (max |M - M^H| = {herm_err:.3e})")
    n = a.shape[0]
    a = 0.5 * (a + a.conj().T)
    if n == 1:
        return np.array([a[0, 0].real])

    threshold = max(tol, np.finfo(float).eps * float(np.linalg.norm(a)))
    off_mask = ~np.eye(n, dtype=bool)
    schedule = _round_robin(n)
    for _ in range(JACOBI_MAX_SWEEPS):
        if np.max(np.abs(a[off_mask])) < threshold:
            return np.sort(np.diag(a).real)
        for ps, qs in schedule:
            _rotate_disjoint(a, ps, qs, threshold)
    if np.max(np.abs(a[off_mask])) < threshold:
        return np.sort(np.diag(a).real)
    raise NumericFailureError(f"Jacobi iteration did not converge in {JACOBI_MAX_SWEEPS} sweeps")


@lru_cache(maxsize=None)
def _round_robin(n: int) -> tuple:
    """Steps of disjoint ``(p, q)`` pairs, ``p < q``, covering every pair exactly once."""
    players = list(range(n)) + ([-1] if n % 2 else [])
    m = len(players)
    steps = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            x, y = players[k], players[m - 1 - k]
            if x < 0 or y < 0:
                continue
            ps.append(min(x, y))
            qs.append(max(x, y))
        steps.append((np.array(ps), np.array(qs)))
        players = [players[0], players[-1]] + players[1:-1]
    return tuple(steps)


def _rotate_disjoint(a: np.ndarray, ps: np.ndarray, qs: np.ndarray, threshold: float) -> None:
    b = a[ps, qs]
    g = np.abs(b)
    active = g >= threshold
    if not active.any():
        return
    ps, qs, b, g = ps[active], qs[active], b[active], g[active]
    phase = np.conj(b / g)
    app = a[ps, ps].real
    aqq = a[qs, qs].real
    theta = (aqq - app) / (2.0 * g)
    t = np.where(theta >= 0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
    c = 1.0 / np.sqrt(t * t + 1.0)
    s = t * c
    # per plane: U = diag(1, phase) @ [[c, s], [-s, c]]
    col_p = a[:, ps]
    col_q = a[:, qs]
    a[:, ps] = c * col_p - (s * phase) * col_q
    a[:, qs] = s * col_p + (c * phase) * col_q
    row_p = a[ps, :]
    row_q = a[qs, :]
    a[ps, :] = c[:, None] * row_p - (s * np.conj(phase))[:, None] * row_q
    a[qs, :] = s[:, None] * row_p + (c * np.conj(phase))[:, None] * row_q
    a[ps, qs] = 0.0
    a[qs, ps] = 0.0
    a[ps, ps] = app - t * g
    a[qs, qs] = aqq + t * g


def is_psd(m: np.ndarray, tol: float = EIGEN_TOL) -> bool:
    """True iff the smallest eigenvalue of Hermitian ``m`` is at least ``-tol``."""
    return bool(hermitian_eigenvalues(m)[0] >= -tol)


def partial_transpose(rho: np.ndarray, p: int) -> np.ndarray:
    """Transpose the B-party factor of a ``4**p``-dimensional operator."""
    rho = _as_square(rho)
    p = check_qubits(p)
    if rho.shape[0] != 4**p:
        raise InvalidArgumentError(f"rho has dimension {rho.shape[0]}, expected {4**p} for p={p}")
    d = 2**p
    return rho.reshape(d, d, d, d).transpose(0, 3, 2, 1).reshape(d * d, d * d).copy()


def _as_square(m) -> np.ndarray:
    arr = np.asarray(m)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1] or arr.shape[0] < 1:
        raise InvalidArgumentError(f"expected a non-empty square matrix; got shape {arr.shape}")
    if not np.issubdtype(arr.dtype, np.number):
        raise InvalidArgumentError(f"matrix entries must be numeric; got dtype {arr.dtype}")
    return arr.astype(complex, copy=False)
