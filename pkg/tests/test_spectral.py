import numpy as np
import pytest
import sympy as sy
from hypothesis import given, strategies as st

from hallmhd import spectral as sp
from hallmhd.errors import DimensionError
from hallmhd.hall import random_solenoidal

TWO_PI = 2 * np.pi


def random_real(grid, seed):
    rng = np.random.default_rng(seed)
    return sp.RealVectorField(grid, rng.standard_normal((3,) + grid.physical_shape))


class TestGrid:
    @pytest.mark.parametrize("n", [3, 2, 7, 33])
    def test_rejects_odd_or_small(self, n):
        with pytest.raises(ValueError):
            sp.Grid3(n)

    @pytest.mark.parametrize("n,kmax", [(4, 1), (16, 5), (32, 10), (48, 16)])
    def test_two_thirds_cutoff(self, n, kmax):
        g = sp.Grid3(n)
        assert g.kmax_kept == kmax
        for kc in g.k:
            kb = np.broadcast_to(kc, g.spectral_shape)
            assert np.all(np.abs(kb[g.mask]) <= kmax)
            assert np.any(np.abs(kb[~g.mask]) > kmax)

    def test_product_grid_is_alias_free(self):
        for n in (16, 18, 32, 48):
            g = sp.Grid3(n)
            assert g.product_n >= 3 * g.kmax_kept + 1
            assert g.product_n % 2 == 0


class TestTransforms:
    def test_constant_field(self, g16):
        F = sp.from_function(g16, lambda x, y, z: (1.0 + 0 * x, 0 * x, 0 * x))
        nz = np.argwhere(np.abs(F.coeffs) > 1e-14)
        assert nz.tolist() == [[0, 0, 0, 0]]
        assert F.coeffs[0, 0, 0, 0] == pytest.approx(1.0, abs=1e-15)

    def test_sine_pair(self, g16):
        F = sp.from_function(g16, lambda x, y, z: (np.sin(TWO_PI * x), 0 * x, 0 * x))
        # rfft layout keeps k=(1,0,0) and k=(-1,0,0) along the full first axis
        assert F.coeffs[0, 1, 0, 0] == pytest.approx(-0.5j, abs=1e-15)
        assert F.coeffs[0, -1, 0, 0] == pytest.approx(0.5j, abs=1e-15)
        assert np.count_nonzero(np.abs(F.coeffs) > 1e-14) == 2

    def test_round_trip_reproduces_dealiased_part(self, g16):
        f = random_real(g16, 0)
        F = sp.forward_transform(f)
        back = sp.forward_transform(sp.inverse_transform(F))
        assert sp.norm(back - F) <= 1e-12 * sp.norm(F)
        undealiased = sp.forward_transform(f, dealias=False)
        assert sp.norm(sp.dealias(undealiased) - F) <= 1e-14 * sp.norm(F)

    def test_extent_mismatch(self, g16):
        with pytest.raises(DimensionError):
            sp.RealVectorField(g16, np.zeros((3, 8, 8, 8)))

    def test_hermitian_symmetry(self, g16):
        assert sp.hermitian_defect(sp.forward_transform(random_real(g16, 1))) < 1e-15


class TestLeray:
    @given(seed=st.integers(0, 2**32 - 1))
    def test_divergence_free_and_idempotent(self, seed):
        g = sp.Grid3(8)
        F = sp.forward_transform(random_real(g, seed))
        P = sp.leray_project(F)
        assert sp.is_divergence_free(P)
        assert sp.norm(sp.leray_project(P) - P) <= 1e-14 * sp.norm(F)

    def test_removes_gradients(self, g16):
        # a pure gradient projects to zero; mean mode is untouched
        grad = sp.from_function(g16, lambda x, y, z: (TWO_PI * np.cos(TWO_PI * x),
                                                      -TWO_PI * np.sin(TWO_PI * y), 0 * z + 0.3))
        P = sp.leray_project(grad)
        assert sp.max_abs(P - sp.from_function(g16, lambda x, y, z: (0 * x, 0 * x, 0 * x + 0.3))) < 1e-13

    def test_orthogonal(self, g16):
        F = sp.forward_transform(random_real(g16, 2))
        P = sp.leray_project(F)
        assert abs(sp.inner_product(P, F - P)) < 1e-13 * sp.inner_product(F, F)


def _sympy_curl(expr):
    x, y, z = sy.symbols("x y z")
    fx, fy, fz = expr
    return (sy.diff(fz, y) - sy.diff(fy, z), sy.diff(fx, z) - sy.diff(fz, x),
            sy.diff(fy, x) - sy.diff(fx, y))


class TestOperators:
    x, y, z = sy.symbols("x y z")
    p = 2 * sy.pi
    field = (sy.sin(p * y) * sy.cos(2 * p * z), sy.cos(p * x) + sy.sin(p * (x + z)),
             sy.sin(2 * p * x) * sy.cos(p * y))

    def _eval(self, grid, exprs):
        fns = [sy.lambdify((self.x, self.y, self.z), e, "numpy") for e in exprs]

        def f(x, y, z):
            return tuple(np.broadcast_to(fn(x, y, z), x.shape).astype(float) for fn in fns)
        return sp.from_function(grid, f)

    def test_curl_matches_symbolic(self, g16):
        F = self._eval(g16, self.field)
        ref = self._eval(g16, _sympy_curl(self.field))
        assert sp.max_abs(sp.curl(F) - ref) < 1e-12 * sp.max_abs(ref)

    def test_laplacian_matches_symbolic(self, g16):
        F = self._eval(g16, self.field)
        lap = [sum(sy.diff(c, v, 2) for v in (self.x, self.y, self.z)) for c in self.field]
        ref = self._eval(g16, lap)
        assert sp.max_abs(sp.laplacian(F) - ref) < 1e-12 * sp.max_abs(ref)

    def test_cross_product_exact_for_resolved_product(self, g16):
        # factors at |k| <= 2 give products at |k| <= 4 <= kmax_kept: no truncation
        F = self._eval(g16, self.field)
        G = self._eval(g16, (sy.cos(self.p * self.z), sy.sin(self.p * self.x), 1 + 0 * self.x))
        fx, fy, fz = self.field
        gx, gy, gz = sy.cos(self.p * self.z), sy.sin(self.p * self.x), sy.Integer(1)
        ref = self._eval(g16, (fy * gz - fz * gy, fz * gx - fx * gz, fx * gy - fy * gx))
        assert sp.max_abs(sp.cross_product_dealiased(F, G) - ref) < 1e-13

    def test_product_has_no_aliasing(self):
        # two modes at kmax whose product lands beyond the cutoff: the
        # dealiased product must have no energy in kept modes
        g = sp.Grid3(12)
        K = g.kmax_kept
        F = sp.from_function(g, lambda x, y, z: (0 * x, np.cos(TWO_PI * K * x), 0 * x))
        G = sp.from_function(g, lambda x, y, z: (0 * x, 0 * x, np.cos(TWO_PI * K * x)))
        P = sp.cross_product_dealiased(F, G)
        # cos^2 = 1/2 + cos(2K)/2: only the mean survives truncation
        assert P.coeffs[0, 0, 0, 0] == pytest.approx(0.5, abs=1e-15)
        P.coeffs[0, 0, 0, 0] = 0
        assert sp.max_abs(P) < 1e-14

    def test_curl_of_gradient_and_div_of_curl(self, g16):
        F = sp.forward_transform(random_real(g16, 3))
        phi = F.coeffs[0]
        assert sp.max_abs(sp.curl(sp.gradient(g16, phi))) < 1e-12
        assert np.max(np.abs(sp.divergence(sp.curl(F)))) < 1e-11

    def test_vector_potential_inverts_curl(self, g16):
        B = random_solenoidal(g16, seed=4)
        A = sp.vector_potential(B)
        assert sp.norm(sp.curl(A) - B) < 1e-13 * sp.norm(B)
        assert sp.is_divergence_free(A)


class TestInnerProduct:
    @given(seed=st.integers(0, 2**32 - 1))
    def test_parseval(self, seed):
        g = sp.Grid3(8)
        F = sp.forward_transform(random_real(g, seed))
        G = sp.forward_transform(random_real(g, seed + 1))
        vf, vg = sp.inverse_transform(F).values, sp.inverse_transform(G).values
        direct = np.mean(np.sum(vf * vg, axis=0))
        assert sp.inner_product(F, G) == pytest.approx(direct, rel=1e-12, abs=1e-14)

    def test_symmetric_and_real(self, g16):
        F = sp.forward_transform(random_real(g16, 5))
        G = sp.forward_transform(random_real(g16, 6))
        a, b = sp.inner_product(F, G), sp.inner_product(G, F)
        assert isinstance(a, float)
        assert a == pytest.approx(b, rel=1e-14)

    def test_single_mode_norm(self, g16):
        F = sp.from_function(g16, lambda x, y, z: (np.sin(TWO_PI * x), 0 * x, 0 * x))
        assert sp.inner_product(F, F) == pytest.approx(0.5, rel=1e-14)
        assert sp.grad_norm_sq(F) == pytest.approx(0.5 * TWO_PI**2, rel=1e-14)


def test_field_arithmetic(g16):
    F = sp.forward_transform(random_real(g16, 7))
    assert sp.norm((F + F) - 2 * F) == 0.0
    assert sp.norm(F / 2 - F * 0.5) == 0.0
    assert sp.norm(-F + F) == 0.0
    with pytest.raises(DimensionError):
        F + sp.zeros(sp.Grid3(8))
