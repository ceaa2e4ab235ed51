"""Random states and the statistical audits built on them.

Randomness comes from numpy's PCG64 generator seeded through
``SeedSequence(seed, spawn_key=stream)``; a given ``(seed, stream)`` pair
always yields the same draws on the same numpy version.  Probability vectors
are uniform on the simplex (normalized unit-rate exponentials) and local pure
states are normalized complex Gaussian vectors (Haar distributed).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, field
from functools import lru_cache
from typing import Iterable, Sequence, Union

import numpy as np

from bellsep import bell_model as bm
from bellsep import separability as sep
from bellsep import tensor_core as tc
from bellsep.bell_model import BellSpectrum, OmegaDiagonal
from bellsep.errors import InternalConsistencyError, InvalidArgumentError

DEFAULT_SEED = 42
AUDIT_SLACK = 1e-9
RESIDUAL_TOL = 1e-10

SeedLike = Union[int, np.random.Generator]


def make_rng(seed: SeedLike, stream: Sequence[int] = ()) -> np.random.Generator:
    """Generator for a 64-bit seed; ``stream`` derives independent sub-streams (e.g. per worker)."""
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed < 2**64:
        raise InvalidArgumentError(f"seed must be an unsigned 64-bit integer; got {seed!r}")
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(int(seed), spawn_key=tuple(stream))))


def uniform_simplex(rng: np.random.Generator, k: int) -> np.ndarray:
    e = rng.exponential(size=k)
    return e / e.sum()


def random_pure_state(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Projector onto a Haar-random unit vector."""
    v = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    v /= np.linalg.norm(v)
    return np.outer(v, v.conj())


@lru_cache(maxsize=None)
def _bell_vector_matrix(p: int) -> np.ndarray:
    # column I is (sigma_I (x) 1)|Phi>, |Phi> = d**-1/2 sum_a |a>|a>; row-major flattening
    # of sigma_I / sqrt(d) is exactly that vector in A-major order
    d = 2**p
    stack = tc.pauli_stack(p)
    v = (stack.reshape(4**p, d * d) / np.sqrt(d)).T.copy()
    v.setflags(write=False)
    return v


def generalized_bell_projector(index: Sequence[int]) -> np.ndarray:
    """``(sigma_I (x) 1) |Phi><Phi| (sigma_I (x) 1)`` for the uniform maximally entangled ``|Phi>``."""
    idx = tc.check_index(index)
    s = tc.pauli_tensor(idx)
    v = s.reshape(-1) / np.sqrt(s.shape[0])
    return np.outer(v, v.conj())


def bell_diagonal_from_weights(p: int, weights: Sequence[float]) -> OmegaDiagonal:
    """State with the given weights on the Bell projectors.

    At ``p = 1`` the weights are read in the order (Phi+, Phi-, Psi+, Psi-).
    For larger ``p`` weight ``k`` goes to the projector of the ``k``-th
    multi-index; the result is checked to be Bell diagonal.
    """
    p = tc.check_qubits(p)
    q = np.asarray(weights, dtype=float)
    if p == 1:
        return bm.omega_from_lambdas(BellSpectrum(1, tuple(q)))
    if q.shape != (4**p,):
        raise InvalidArgumentError(f"expected {4**p} weights, got shape {q.shape}")
    v = _bell_vector_matrix(p)
    rho = (v * q) @ v.conj().T
    omega, residual = bm.omega_from_density(rho, p)
    if residual > RESIDUAL_TOL:
        raise InternalConsistencyError(f"generalized Bell mixture has cross coefficient {residual:.3e}")
    return omega


def sample_bell_diagonal(p: int, seed: SeedLike) -> OmegaDiagonal:
    """One Bell diagonal state with uniformly random Bell weights."""
    p = tc.check_qubits(p)
    rng = make_rng(seed)
    return bell_diagonal_from_weights(p, uniform_simplex(rng, 4**p))


def iter_bell_diagonal(p: int, n: int, seed: SeedLike):
    rng = make_rng(seed)
    for _ in range(n):
        yield sample_bell_diagonal(p, rng)


def separable_from_ensemble(ensemble: Iterable[tuple]) -> np.ndarray:
    """``sum_k w_k rho_k^A (x) rho_k^B``."""
    terms = [w * np.kron(a, b) for w, a, b in ensemble]
    if not terms:
        raise InvalidArgumentError("ensemble is empty")
    return sum(terms)


def sample_separable(p: int, n_terms: int, seed: SeedLike) -> tuple[np.ndarray, list]:
    """Random convex mixture of ``n_terms`` random pure product states.

    Returns ``(density, ensemble)`` with ``ensemble`` a list of
    ``(weight, rho_A, rho_B)`` triples.
    """
    p = tc.check_qubits(p)
    if n_terms < 1:
        raise InvalidArgumentError(f"n_terms must be >= 1, got {n_terms}")
    rng = make_rng(seed)
    d = 2**p
    weights = uniform_simplex(rng, n_terms)
    ensemble = [(float(w), random_pure_state(rng, d), random_pure_state(rng, d)) for w in weights]
    return separable_from_ensemble(ensemble), ensemble


# -- crosscheck ---------------------------------------------------------------

CELL_ORDER = [(c.value, q.value) for c in sep.Verdict for q in sep.PptVerdict]


@dataclass(frozen=True)
class CrosscheckSummary:
    p: int
    n_samples: int
    seed: int | None
    tol: float
    counts: dict
    boundary_count: int
    off_boundary_disagreements: int

    def to_dict(self) -> dict:
        d = asdict(self)
        d["counts"] = {f"{c}/{q}": self.counts.get((c, q), 0) for c, q in CELL_ORDER}
        return d


def _disagree(criterion: str, ppt: str) -> bool:
    return (criterion == "entangled") != (ppt == "npt")


def summarize(states: Iterable[OmegaDiagonal], p: int, tol: float = tc.BOUNDARY_TOL, seed=None) -> CrosscheckSummary:
    """Tabulate criterion verdict against PPT verdict for already-built states.

    At ``p = 1`` the PT spectrum is the closed form; otherwise the Jacobi
    solver.  The PPT threshold is ``tol / 4`` (see :func:`separability.analyze`).
    Only the p = 1 table is expected to be diagonal; for larger p an
    inconclusive/ppt or inconclusive/npt entry is data, not a disagreement.
    """
    counts = {cell: 0 for cell in CELL_ORDER}
    n = boundary = off = 0
    bound = sep.criterion_bound(p)
    for omega in states:
        if omega.p != p:
            raise InvalidArgumentError(f"state has p={omega.p}, expected {p}")
        s = sep.criterion_sum(omega)
        verdict = sep.classify_sum(s, p, tol)
        if p == 1:
            low = min(sep.ppt_eigenvalues_closed_form(omega))
        else:
            low = float(sep.ppt_spectrum(omega)[0])
        ppt = sep.PptVerdict.PPT if low >= -tol / 4.0 else sep.PptVerdict.NPT
        counts[(verdict.value, ppt.value)] += 1
        n += 1
        on_boundary = abs(s - bound) < tol
        boundary += on_boundary
        if p == 1 and not on_boundary and _disagree(verdict.value, ppt.value):
            off += 1
    return CrosscheckSummary(p, n, seed, tol, counts, boundary, off)


def crosscheck(p: int, n: int, seed: int = DEFAULT_SEED, tol: float = tc.BOUNDARY_TOL) -> CrosscheckSummary:
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    return summarize(iter_bell_diagonal(p, n, seed), p, tol, seed)


def crosscheck_p1(n: int, seed: int = DEFAULT_SEED, tol: float = tc.BOUNDARY_TOL) -> CrosscheckSummary:
    return crosscheck(1, n, seed, tol)


# -- audits -------------------------------------------------------------------


@dataclass(frozen=True)
class InequalityStats:
    """Slack ``larger side - smaller side`` of one inequality over many checks."""

    name: str
    checks: int
    violations: int
    min_slack: float
    max_slack: float

    @classmethod
    def from_slacks(cls, name: str, slacks: Sequence[float], allowance: float = AUDIT_SLACK):
        arr = np.asarray(slacks, dtype=float)
        return cls(name, int(arr.size), int(np.sum(arr < -allowance)), float(arr.min()), float(arr.max()))


@dataclass(frozen=True)
class AuditReport:
    name: str
    p: int
    n: int
    n_terms: int
    seed: int | None
    inequalities: tuple
    extra: dict = field(default_factory=dict)

    @property
    def violations(self) -> int:
        return sum(s.violations for s in self.inequalities)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["violations"] = self.violations
        return d


def necessary_condition_audit(
    p: int, n: int, n_terms: int = 4, seed: int = DEFAULT_SEED
) -> AuditReport:
    """Check ``sum_I |trace(rho sigma_I (x) sigma_I)| <= 2**p`` on random separable states."""
    p = tc.check_qubits(p)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    rng = make_rng(seed)
    bound = float(2**p)
    sums = np.array([sep.pauli_diagonal_sum(sample_separable(p, n_terms, rng)[0], p) for _ in range(n)])
    stats = InequalityStats.from_slacks("pauli_diagonal_sum", bound - sums)
    return AuditReport(
        "necessary_condition", p, n, n_terms, seed, (stats,), {"bound": bound, "max_sum": float(sums.max())}
    )


def local_coefficients(rho: np.ndarray, p: int) -> np.ndarray:
    """``trace(rho @ sigma_I)`` for a single-party state; index 0 is the trace."""
    return tc.pauli_coefficients(rho, p).real


def purity_terms(coeffs: np.ndarray, p: int) -> tuple[float, float]:
    """``((Omega_0)**2, 2**-p sum Omega_I**2)``; the first dominates for any state."""
    return float(coeffs[0] ** 2), float(np.sum(coeffs**2) / 2**p)


def product_terms(coeffs_a: np.ndarray, coeffs_b: np.ndarray, p: int) -> tuple[float, float]:
    """``(Omega^A_0 Omega^B_0, 2**-p sum |Omega^A_I Omega^B_I|)``."""
    return float(coeffs_a[0] * coeffs_b[0]), float(np.sum(np.abs(coeffs_a * coeffs_b)) / 2**p)


def mixture_terms(weights: np.ndarray, coeffs_a: np.ndarray, coeffs_b: np.ndarray, p: int) -> tuple[float, float, float]:
    """The three members of the weighted chain; each is at least the next one.

    ``coeffs_a`` and ``coeffs_b`` have one row per ensemble term.
    """
    prod = coeffs_a * coeffs_b
    w = np.asarray(weights, dtype=float)[:, None]
    top = float(np.sum(w[:, 0] * prod[:, 0]))
    middle = float(np.sum(w * np.abs(prod)) / 2**p)
    bottom = float(np.sum(np.abs(np.sum(w * prod, axis=0))) / 2**p)
    return top, middle, bottom


def chain_audit(p: int, n: int, seed: int = DEFAULT_SEED, n_terms: int = 4) -> AuditReport:
    """Check each link of the necessity argument on ``n`` random separable ensembles."""
    p = tc.check_qubits(p)
    if n < 1:
        raise InvalidArgumentError(f"n must be >= 1, got {n}")
    rng = make_rng(seed)
    purity_slack, product_slack, weighted_slack, triangle_slack = [], [], [], []
    for _ in range(n):
        _, ensemble = sample_separable(p, n_terms, rng)
        weights = np.array([w for w, _, _ in ensemble])
        ca = np.array([local_coefficients(a, p) for _, a, _ in ensemble])
        cb = np.array([local_coefficients(b, p) for _, _, b in ensemble])
        for k in range(len(ensemble)):
            for c in (ca[k], cb[k]):
                lhs, rhs = purity_terms(c, p)
                purity_slack.append(lhs - rhs)
            lhs, rhs = product_terms(ca[k], cb[k], p)
            product_slack.append(lhs - rhs)
        top, middle, bottom = mixture_terms(weights, ca, cb, p)
        weighted_slack.append(top - middle)
        triangle_slack.append(middle - bottom)
    stats = (
        InequalityStats.from_slacks("local_purity", purity_slack),
        InequalityStats.from_slacks("cauchy_schwarz_product", product_slack),
        InequalityStats.from_slacks("weighted_sum", weighted_slack),
        InequalityStats.from_slacks("triangle", triangle_slack),
    )
    return AuditReport("chain", p, n, n_terms, seed, stats)
