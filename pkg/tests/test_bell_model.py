import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from bellsep import bell_model as bm
from bellsep import tensor_core as tc
from bellsep.bell_model import BellSpectrum, OmegaDiagonal
from bellsep.errors import InvalidArgumentError, NotAStateError, UnsupportedDimensionError

from conftest import bell_states

# rows: lambda_k = 1/4 (1 + row . Omega)
EQ_LAMBDA_SIGNS = np.array([[1, 1, 1], [-1, -1, 1], [1, -1, -1], [-1, 1, -1]])


def omega_oracle(lam):
    """Solve the four linear lambda(Omega) equations by least squares."""
    a = np.hstack([np.ones((4, 1)), EQ_LAMBDA_SIGNS]) / 4
    sol, *_ = np.linalg.lstsq(a, np.asarray(lam, dtype=float), rcond=None)
    return sol[1:] / sol[0]


def bell_mixture(lam):
    vecs = bm.bell_vectors()
    return sum(l * np.outer(v, v.conj()) for l, v in zip(lam, vecs))


simplex4 = st.lists(st.floats(0.0, 1.0), min_size=4, max_size=4).filter(lambda x: sum(x) > 1e-3).map(
    lambda x: tuple(v / sum(x) for v in x)
)


class TestOmegaDiagonal:
    def test_defaults_and_lookup(self):
        o = OmegaDiagonal(2, {(1, 3): 0.5})
        assert o[(0, 0)] == 1.0
        assert o[(1, 3)] == 0.5
        assert o[(2, 2)] == 0.0
        v = o.vector()
        assert v[0] == 1 and v[tc.multi_indices(2).index((1, 3))] == 0.5 and v.sum() == 1.5

    def test_rejects_identity_key(self):
        with pytest.raises(InvalidArgumentError):
            OmegaDiagonal(1, {(0,): 1.0})

    def test_rejects_out_of_unit_interval(self):
        with pytest.raises(InvalidArgumentError):
            OmegaDiagonal.from_triple(1.5, 0, 0)

    def test_rejects_wrong_length_key(self):
        with pytest.raises(InvalidArgumentError):
            OmegaDiagonal(2, {(1,): 0.1})

    def test_immutable(self):
        o = OmegaDiagonal.from_triple(0.1, 0.2, 0.3)
        with pytest.raises(TypeError):
            o.coeffs[(1,)] = 0.9
        with pytest.raises(AttributeError):
            o.p = 2

    def test_vector_round_trip(self):
        o = OmegaDiagonal(2, {(1, 1): 0.25, (3, 2): -0.5})
        assert OmegaDiagonal.from_vector(2, o.vector()) == OmegaDiagonal.from_vector(2, o.vector())
        np.testing.assert_array_equal(OmegaDiagonal.from_vector(2, o.vector()).vector(), o.vector())


class TestLambdaOmega:
    def test_maximally_mixed(self):
        assert bm.omega_from_lambdas(BellSpectrum(1, (0.25,) * 4)).triple() == (0, 0, 0)

    def test_phi_plus(self):
        assert bm.omega_from_lambdas(BellSpectrum(1, (1, 0, 0, 0))).triple() == (1, 1, 1)
        np.testing.assert_allclose(omega_oracle((1, 0, 0, 0)), (1, 1, 1), atol=1e-12)

    def test_werner_third(self):
        lam = (1 / 6, 1 / 6, 1 / 6, 1 / 2)
        expected = omega_oracle(lam)
        np.testing.assert_allclose(expected, (-1 / 3, 1 / 3, -1 / 3), atol=1e-12)
        np.testing.assert_allclose(bm.omega_from_lambdas(BellSpectrum(1, lam)).triple(), expected, atol=1e-12)

    def test_inverse_examples(self):
        assert bm.lambdas_from_omega(OmegaDiagonal.from_triple(0, 0, 0)).lambdas == (0.25,) * 4
        assert bm.lambdas_from_omega(OmegaDiagonal.from_triple(1, 1, 1)).lambdas == (1, 0, 0, 0)

    def test_outside_tetrahedron(self):
        with pytest.raises(NotAStateError) as info:
            bm.lambdas_from_omega(OmegaDiagonal.from_triple(1, -1, 1))
        assert info.value.eigenvalue == pytest.approx(-0.5)

    def test_p2_unsupported(self):
        with pytest.raises(UnsupportedDimensionError):
            bm.omega_from_lambdas(BellSpectrum(2, (1 / 16,) * 16))
        with pytest.raises(UnsupportedDimensionError):
            bm.lambdas_from_omega(OmegaDiagonal(2, {}))

    def test_spectrum_validation(self):
        with pytest.raises(NotAStateError):
            BellSpectrum(1, (1.1, -0.1, 0, 0))
        with pytest.raises(InvalidArgumentError):
            BellSpectrum(1, (0.5, 0.5, 0.5, 0))
        with pytest.raises(InvalidArgumentError):
            BellSpectrum(1, (1, 0, 0))

    @settings(max_examples=200, deadline=None)
    @given(simplex4)
    def test_round_trip(self, lam):
        omega = bm.omega_from_lambdas(BellSpectrum(1, lam))
        np.testing.assert_allclose(bm.lambdas_from_omega(omega).lambdas, lam, atol=1e-12)
        np.testing.assert_allclose(omega.triple(), omega_oracle(lam), atol=1e-12)

    @settings(max_examples=100, deadline=None)
    @given(simplex4)
    def test_three_forms_agree(self, lam):
        # Bell mixture == Pauli expansion == density built from Omega
        rho = bm.to_density_matrix(bm.omega_from_lambdas(BellSpectrum(1, lam)))
        np.testing.assert_allclose(rho, bell_mixture(lam), atol=1e-12)
        np.testing.assert_allclose(tc.hermitian_eigenvalues(rho), sorted(lam), atol=1e-10)


class TestDensity:
    def test_maximally_mixed_p1(self):
        np.testing.assert_allclose(bm.to_density_matrix(OmegaDiagonal(1, {})), np.eye(4) / 4, atol=1e-15)

    def test_phi_plus(self):
        amp = np.array([1, 0, 0, 1]) / np.sqrt(2)
        np.testing.assert_allclose(bm.to_density_matrix(OmegaDiagonal.from_triple(1, 1, 1)), np.outer(amp, amp), atol=1e-15)

    def test_maximally_mixed_p2(self):
        np.testing.assert_allclose(bm.to_density_matrix(OmegaDiagonal(2, {})), np.eye(16) / 16, atol=1e-15)

    def test_matches_explicit_sum(self, rng):
        for p in (1, 2):
            vec = rng.uniform(-1, 1, 4**p)
            vec[0] = 1
            o = OmegaDiagonal.from_vector(p, vec)
            explicit = np.eye(4**p, dtype=complex)
            for k, idx in enumerate(tc.multi_indices(p)):
                if k:
                    s = tc.pauli_tensor(idx)
                    explicit += (-1) ** tc.basis_sign_exponent(idx) * vec[k] * np.kron(s, s)
            rho = bm.to_density_matrix(o)
            np.testing.assert_allclose(rho, explicit / 4**p, atol=1e-14)
            assert abs(np.trace(rho) - 1) < 1e-12
            assert tc.hermiticity_error(rho) < 1e-12


class TestExtraction:
    def test_maximally_mixed(self):
        o, res = bm.omega_from_density(np.eye(4) / 4, 1)
        assert o.triple() == (0, 0, 0) and res == 0

    def test_phi_plus(self):
        amp = np.array([1, 0, 0, 1]) / np.sqrt(2)
        o, res = bm.omega_from_density(np.outer(amp, amp), 1)
        np.testing.assert_allclose(o.triple(), (1, 1, 1), atol=1e-12)
        assert res < 1e-12

    def test_product_state_residual(self):
        rho = np.zeros((4, 4))
        rho[1, 1] = 1  # |01><01|
        _, res = bm.omega_from_density(rho, 1)
        assert res >= 1 - 1e-10
        value, _ = tc.hs_coefficient(rho, (3,), (0,))
        assert value == pytest.approx(1.0)

    def test_dimension_mismatch(self):
        with pytest.raises(InvalidArgumentError):
            bm.omega_from_density(np.eye(4) / 4, 2)

    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_round_trip(self, p):
        for o in bell_states(p, 20, seed=p):
            rho = bm.to_density_matrix(o)
            back, res = bm.omega_from_density(rho, p)
            assert res < 1e-12
            np.testing.assert_allclose(back.vector(), o.vector(), atol=1e-12)
            np.testing.assert_allclose(bm.to_density_matrix(back), rho, atol=1e-12)


class TestValidateAndPurity:
    def test_validate_examples(self):
        assert bm.validate(OmegaDiagonal.from_triple(0, 0, 0))
        assert bm.validate(OmegaDiagonal.from_triple(1, 1, 1))
        assert not bm.validate(OmegaDiagonal.from_triple(1, -1, 1))

    def test_validate_p2(self):
        assert bm.validate(OmegaDiagonal(2, {idx: 1.0 for idx in tc.multi_indices(2)[1:]}))
        assert not bm.validate(OmegaDiagonal(2, {(1, 1): 1.0, (2, 2): 1.0}))

    def test_purity_examples(self):
        assert bm.purity(OmegaDiagonal(1, {})) == 0.25
        assert bm.purity(OmegaDiagonal.from_triple(1, 1, 1)) == 1.0
        o = OmegaDiagonal(2, {(1, 2): 0.5})
        rho = bm.to_density_matrix(o)
        assert np.trace(rho @ rho).real == pytest.approx(0.078125, abs=1e-12)
        assert bm.purity(o) == 0.078125

    @pytest.mark.parametrize("p", [1, 2])
    def test_purity_matches_dense(self, p):
        for o in bell_states(p, 100, seed=10 + p):
            rho = bm.to_density_matrix(o)
            dense = np.trace(rho @ rho).real
            assert abs(bm.purity(o) - dense) < 1e-12
            assert 1 / 4**p - 1e-15 <= bm.purity(o) <= 1
