"""Acceptance criteria, one test each; every test prints a single PASS/FAIL line."""

import math
import subprocess
import sys
import time

import numpy as np
import pytest

from bellsep import bell_model as bm
from bellsep import ensemble as ens
from bellsep import separability as sep
from bellsep import tensor_core as tc
from bellsep.bell_model import BellSpectrum
from bellsep.separability import Verdict


@pytest.fixture
def report(capsys):
    def emit(number, title, ok, detail):
        with capsys.disabled():
            print(f"\n[{'PASS' if ok else 'FAIL'}] criterion {number}: {title} ({detail})")
        assert ok, detail

    return emit


def random_p1_states(n, seed):
    return list(ens.iter_bell_diagonal(1, n, seed))


def pt_min_oracle(omega):
    # PT eigenvalues written out from the Bell-vector basis, independent of the package
    o1, o2, o3 = omega.triple()
    return min(1 + o1 - o2 + o3, 1 - o1 + o2 + o3, 1 + o1 + o2 - o3, 1 - o1 - o2 - o3) / 4


def werner_weights(x):
    return ((1 - x) / 4, (1 - x) / 4, (1 - x) / 4, (1 + 3 * x) / 4)


def werner_density(x):
    # mixture of Bell projectors, built without the Omega representation
    v = bm.bell_vectors()
    return (v.T * np.array(werner_weights(x))) @ v.conj()


def test_criterion_1_equivalence_p1(report):
    start = time.perf_counter()
    states = random_p1_states(10_000, 42)
    bad = 0
    for o in states:
        entangled = sep.criterion_verdict(o) is Verdict.ENTANGLED
        if entangled != (pt_min_oracle(o) < 0) and abs(sep.criterion_sum(o) - 1) >= 1e-9:
            bad += 1
    elapsed = time.perf_counter() - start
    report(1, "criterion iff PPT at p=1", bad == 0 and elapsed < 5.0, f"{bad} off-boundary disagreements, {elapsed:.2f}s")


def test_criterion_2_closed_form_spectra(report):
    worst = 0.0
    for o in random_p1_states(1000, 7):
        rho = bm.to_density_matrix(o)
        lam = sorted(bm.lambdas_from_omega(o).lambdas)
        worst = max(worst, np.max(np.abs(np.array(lam) - tc.hermitian_eigenvalues(rho))))
        pt = sorted(sep.ppt_eigenvalues_closed_form(o))
        worst = max(worst, np.max(np.abs(np.array(pt) - tc.hermitian_eigenvalues(tc.partial_transpose(rho, 1)))))
    report(2, "closed-form spectra vs eigensolver", worst <= 1e-10, f"max deviation {worst:.2e}")


def test_criterion_3_decomposition(report):
    rng = ens.make_rng(11)
    built = 0
    worst_res = worst_eig = 0.0
    failures = []
    while built < 1000:
        o = ens.sample_bell_diagonal(1, rng)
        s = sep.criterion_sum(o)
        if s > 1:
            continue
        built += 1
        dec = sep.build_decomposition(o)
        check = sep.verify_decomposition(dec, o)
        if not check:
            failures.append(check.reason)
        worst_res = max(worst_res, float(np.max(np.abs(dec.reconstruct() - bm.to_density_matrix(o)))))
        expected = [(1 - math.sqrt(s)) / 2, (1 + math.sqrt(s)) / 2]
        for m in dec.local_a + dec.local_b:
            worst_eig = max(worst_eig, float(np.max(np.abs(tc.hermitian_eigenvalues(m) - expected))))
    ok = not failures and worst_res < 1e-12 and worst_eig <= 1e-10
    report(3, "decomposition soundness", ok, f"{len(failures)} failed, residual {worst_res:.2e}, local spectra {worst_eig:.2e}")


def test_criterion_4_werner(report):
    def npt(x):
        return np.linalg.eigvalsh(tc.partial_transpose(werner_density(x), 1))[0] < 0

    lo, hi = 0.0, 1.0
    assert not npt(lo) and npt(hi)
    for _ in range(60):
        mid = (lo + hi) / 2
        lo, hi = (lo, mid) if npt(mid) else (mid, hi)
    flip = (lo + hi) / 2

    worst_sum = 0.0
    verdict_ok = True
    for x in np.linspace(0, 1, 301):
        o = bm.omega_from_lambdas(BellSpectrum(1, werner_weights(x)))
        worst_sum = max(worst_sum, abs(sep.criterion_sum(o) - 3 * x))
        if abs(x - 1 / 3) > 1e-9:
            verdict_ok &= (sep.criterion_verdict(o) is Verdict.ENTANGLED) == (x > 1 / 3)
    ok = abs(flip - 1 / 3) < 1e-12 and worst_sum <= 1e-12 and verdict_ok
    report(4, "Werner threshold", ok, f"PPT flip at {flip:.15f}, |S-3x| <= {worst_sum:.1e}, verdicts agree: {verdict_ok}")


@pytest.mark.parametrize("p", [1, 2])
def test_criterion_5_necessity(report, p):
    start = time.perf_counter()
    r = ens.necessary_condition_audit(p, 1000, seed=42)
    elapsed = time.perf_counter() - start
    ok = r.violations == 0 and elapsed < 60
    report(5, f"necessary condition at p={p}", ok, f"{r.violations} violations, max sum {r.extra['max_sum']:.6f} <= {2**p}, {elapsed:.2f}s")


@pytest.mark.parametrize("p", [1, 2])
def test_criterion_6_chain(report, p):
    r = ens.chain_audit(p, 1000, seed=42)
    detail = ", ".join(f"{s.name}={s.violations}" for s in r.inequalities)
    report(6, f"proof-chain inequalities at p={p}", r.violations == 0, detail)


def test_criterion_7_round_trips(report):
    rng = ens.make_rng(99)
    worst = {"lambda": 0.0, "density p=1": 0.0, "density p=2": 0.0, "purity": 0.0, "pt involution": 0.0}
    for _ in range(100):
        lam = ens.uniform_simplex(rng, 4)
        back = bm.lambdas_from_omega(bm.omega_from_lambdas(BellSpectrum(1, tuple(lam)))).lambdas
        worst["lambda"] = max(worst["lambda"], float(np.max(np.abs(np.array(back) - lam))))
        for p in (1, 2):
            o = ens.sample_bell_diagonal(p, rng)
            rho = bm.to_density_matrix(o)
            o2, _ = bm.omega_from_density(rho, p)
            worst[f"density p={p}"] = max(worst[f"density p={p}"], float(np.max(np.abs(o2.vector() - o.vector()))))
            dense = float(np.trace(rho @ rho).real)
            worst["purity"] = max(worst["purity"], abs(bm.purity(o) - dense))
            twice = tc.partial_transpose(tc.partial_transpose(rho, p), p)
            worst["pt involution"] = max(worst["pt involution"], float(np.max(np.abs(twice - rho))))
    ok = all(v <= 1e-12 for v in worst.values())
    report(7, "round trips", ok, ", ".join(f"{k} {v:.1e}" for k, v in worst.items()))


def _run(*args):
    return subprocess.run([sys.executable, "-m", "bellsep", *args], capture_output=True, check=False).stdout


def test_criterion_8_determinism(report):
    commands = [
        ("crosscheck", "--p", "1", "--n", "10000", "--seed", "42", "--json"),
        ("crosscheck", "--p", "2", "--n", "50", "--seed", "7"),
        ("audit", "--p", "2", "--n", "100", "--seed", "42", "--json"),
        ("audit", "--p", "1", "--n", "100", "--seed", "3"),
    ]
    same = []
    for c in commands:
        first = _run(*c)
        same.append(len(first) > 0 and first == _run(*c))
    report(8, "byte-identical reports", all(same), f"{sum(same)}/{len(same)} commands reproducible")
