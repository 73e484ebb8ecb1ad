"""Finite-difference validation of the closed-form benchmark cases.

Every hand-coded derivative table (gradient, Hessian, bilaplacian) is checked
against central finite differences of the corresponding function, and the
induced data (volume load, interface jump, plate loads) against their
defining formulas.  Also pins down a handful of exact point values so a silent
sign or scaling change cannot slip through.
"""

import numpy as np
import pytest
from numpy.testing import assert_allclose

from bodyplate.manufactured import (
    INTERFACE_NORMAL,
    constant_stress_case,
    default_case,
)
from bodyplate.materials import c0_apply, default_params

FD_STEP = 1e-5
FD_TOL = 1e-6


def fd_gradient(f, x, is_vector=True):
    """Central-difference Jacobian d f_i / d x_j at a batch of points."""
    x = np.asarray(x, dtype=float)
    probes = []
    for j in range(x.shape[-1]):
        step = np.zeros(x.shape[-1])
        step[j] = FD_STEP
        probes.append((f(x + step) - f(x - step)) / (2 * FD_STEP))
    out = np.stack(probes, axis=-1)
    return out if is_vector else out


@pytest.fixture(scope="module")
def case():
    return default_case()


@pytest.fixture(scope="module")
def body_points():
    rng = np.random.default_rng(12)
    pts = rng.uniform([-0.45, -0.45, 0.05], [0.45, 0.45, 0.95], size=(40, 3))
    return pts


@pytest.fixture(scope="module")
def plate_points():
    rng = np.random.default_rng(21)
    return rng.uniform(-0.95, 0.95, size=(40, 2))


class TestDerivativeTables:
    def test_grad_u_body(self, case, body_points):
        fd = fd_gradient(case.u_body, body_points)
        assert_allclose(case.grad_u_body(body_points), fd, atol=FD_TOL)

    def test_hess_u_body(self, case, body_points):
        fd = fd_gradient(case.grad_u_body, body_points)
        assert_allclose(case.hess_u_body(body_points), fd, atol=FD_TOL)

    def test_grad_u_membrane(self, case, plate_points):
        fd = fd_gradient(case.u_membrane, plate_points)
        assert_allclose(case.grad_u_membrane(plate_points), fd, atol=FD_TOL)

    def test_hess_u_membrane(self, case, plate_points):
        fd = fd_gradient(case.grad_u_membrane, plate_points)
        assert_allclose(case.hess_u_membrane(plate_points), fd, atol=FD_TOL)

    def test_grad_u3(self, case, plate_points):
        fd = fd_gradient(case.u3, plate_points)
        assert_allclose(case.grad_u3(plate_points), fd, atol=FD_TOL)

    def test_hess_u3(self, case, plate_points):
        fd = fd_gradient(case.grad_u3, plate_points)
        assert_allclose(case.hess_u3(plate_points), fd, atol=FD_TOL)

    def test_bilap_u3(self, case, plate_points):
        # Laplacian of the Laplacian via the Hessian table, which is itself
        # FD-verified above.
        def lap(p):
            H = case.hess_u3(p)
            return H[..., 0, 0] + H[..., 1, 1]

        fd2 = fd_gradient(lambda p: fd_gradient(lap, p), plate_points)
        fd_bilap = fd2[..., 0, 0] + fd2[..., 1, 1]
        assert_allclose(case.bilap_u3(plate_points), fd_bilap, atol=1e-3)


class TestInducedData:
    def test_f_body_equals_minus_div_sigma(self, case, body_points):
        # -div sigma via finite differences of the closed-form stress.
        div = np.zeros((body_points.shape[0], 3))
        for j in range(3):
            step = np.zeros(3)
            step[j] = FD_STEP
            div += (
                case.sigma_body(body_points + step)[:, :, j]
                - case.sigma_body(body_points - step)[:, :, j]
            ) / (2 * FD_STEP)
        assert_allclose(case.f_body(body_points), -div, atol=1e-4)

    def test_sigma_is_c0_of_strain(self, case, body_points):
        sig = case.sigma_body(body_points)
        eps = case.strain_body(body_points)
        assert_allclose(sig, c0_apply(eps, case.params), atol=1e-12)
        assert_allclose(sig, np.swapaxes(sig, -1, -2), atol=1e-12)

    def test_f_jump_is_interface_traction(self, case):
        rng = np.random.default_rng(2)
        p = rng.uniform(-0.45, 0.45, size=(20, 2))
        x = np.column_stack([p, np.zeros(len(p))])
        expected = np.einsum(
            "qab,b->qa", case.sigma_body(x), INTERFACE_NORMAL
        )
        assert_allclose(case.f_jump(p), expected, atol=1e-12)

    def test_f_bending_formula(self, case, plate_points):
        assert_allclose(
            case.f_bending(plate_points),
            case.params.d_beta * case.bilap_u3(plate_points),
            atol=1e-12,
        )

    def test_f_membrane_matches_fd_divergence(self, case):
        # -div(C1 eps(u*)) via finite differences.
        prm = case.params

        def n_stress(p):
            g = case.grad_u_membrane(p)
            eps = 0.5 * (g + np.swapaxes(g, -1, -2))
            c = prm.e_beta * prm.t_beta / (1.0 - prm.nu_beta**2)
            tr = eps[..., 0, 0] + eps[..., 1, 1]
            out = c * (1.0 - prm.nu_beta) * eps
            out[..., 0, 0] += c * prm.nu_beta * tr
            out[..., 1, 1] += c * prm.nu_beta * tr
            return out

        rng = np.random.default_rng(5)
        p = rng.uniform(-0.9, 0.9, size=(20, 2))
        div = np.zeros((20, 2))
        for j in range(2):
            step = np.zeros(2)
            step[j] = FD_STEP
            div += (n_stress(p + step)[:, :, j] - n_stress(p - step)[:, :, j]) / (
                2 * FD_STEP
            )
        assert_allclose(case.f_membrane(p), -div, atol=1e-3)


class TestCompatibility:
    def test_plate_fields_are_body_trace(self, case):
        rng = np.random.default_rng(7)
        p = rng.uniform(-0.45, 0.45, size=(25, 2))
        x = np.column_stack([p, np.zeros(len(p))])
        ub = case.u_body(x)
        assert_allclose(case.u_membrane(p), ub[:, :2], atol=1e-13)
        assert_allclose(case.u3(p), ub[:, 2], atol=1e-13)

    def test_clamped_plate_boundary(self, case):
        # u* and u3 and grad u3 vanish on the boundary of (-1,1)^2.
        s = np.linspace(-1.0, 1.0, 17)
        for edge in (
            np.column_stack([s, np.full_like(s, -1.0)]),
            np.column_stack([s, np.full_like(s, 1.0)]),
            np.column_stack([np.full_like(s, -1.0), s]),
            np.column_stack([np.full_like(s, 1.0), s]),
        ):
            assert_allclose(case.u_membrane(edge), 0.0, atol=1e-13)
            assert_allclose(case.u3(edge), 0.0, atol=1e-13)
            assert_allclose(case.grad_u3(edge), 0.0, atol=1e-13)

    def test_point_values(self, case):
        # u^alpha(0, 0, 0) = (0, 0, 1): S(0,0) = 0, P(0) Q(0) R(0) = 1.
        val = case.u_body(np.array([[0.0, 0.0, 0.0]]))
        assert_allclose(val, [[0.0, 0.0, 1.0]], atol=1e-14)
        # In-plane shear stresses vanish at the origin by symmetry.
        sig = case.sigma_body(np.array([[0.0, 0.0, 0.0]]))[0]
        assert sig[0, 1] == pytest.approx(0.0, abs=1e-13)

    def test_interface_normal_convention(self):
        assert_allclose(INTERFACE_NORMAL, [0.0, 0.0, -1.0], atol=0)

    def test_exact_deflection_l2_norm(self, case):
        # ||u3||_{0,Gamma'}^2 over (-1,1)^2 = (int (1-x^2)^4 dx)^2 = (256/315)^2
        # since R(0) = 1; a dense tensor-product Gauss rule reproduces it.
        from numpy.polynomial.legendre import leggauss

        xg, wg = leggauss(20)
        P = np.column_stack([np.repeat(xg, 20), np.tile(xg, 20)])
        W = np.outer(wg, wg).ravel()
        val = float(np.sum(W * case.u3(P) ** 2))
        assert val == pytest.approx((256.0 / 315.0) ** 2, rel=1e-12)


class TestConstantStressCase:
    def test_stress_is_constant_and_correct(self):
        c = np.array([0.3, -0.2, 0.5])
        case = constant_stress_case(c)
        prm = case.params
        mu, lam = prm.lame_mu_alpha, prm.lame_lambda_alpha
        rng = np.random.default_rng(3)
        x = rng.uniform(-0.4, 0.4, size=(10, 3))
        x[:, 2] = rng.uniform(0.1, 0.9, size=10)
        sig = case.sigma_body(x)
        expected = np.zeros((3, 3))
        expected[0, 0] = expected[1, 1] = lam * c[2]
        expected[2, 2] = (2 * mu + lam) * c[2]
        expected[0, 2] = expected[2, 0] = mu * c[0]
        expected[1, 2] = expected[2, 1] = mu * c[1]
        assert_allclose(sig, np.broadcast_to(expected, sig.shape), atol=1e-12)

    def test_zero_volume_load(self):
        case = constant_stress_case()
        x = np.random.default_rng(1).uniform(0.1, 0.4, size=(5, 3))
        assert_allclose(case.f_body(x), 0.0, atol=1e-14)

    def test_plate_fields_vanish(self):
        case = constant_stress_case()
        p = np.random.default_rng(2).uniform(-0.9, 0.9, size=(5, 2))
        assert_allclose(case.u_membrane(p), 0.0, atol=0)
        assert_allclose(case.u3(p), 0.0, atol=0)
        assert_allclose(case.f_bending(p), 0.0, atol=0)

    def test_jump_equals_minus_stress_column(self):
        c = np.array([0.1, 0.2, -0.4])
        case = constant_stress_case(c)
        p = np.zeros((1, 2))
        sig = case.sigma_body(np.array([[0.0, 0.0, 0.0]]))[0]
        assert_allclose(case.f_jump(p)[0], -sig[:, 2], atol=1e-13)
