import math
from dataclasses import replace

import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy import constants as C

from hallmhd import scaling as sc
from hallmhd.errors import ConfigError, DimensionError
from hallmhd.scaling import PhysicalParams, RegimeLabel, classify_regime, compute_groups

PROPS = settings(max_examples=1000, deadline=None)


def logs(lo, hi):
    return st.floats(lo, hi).map(lambda e: 10.0**e)


params = st.builds(
    PhysicalParams,
    m_e=logs(-31, -29), m_i=logs(-27, -25), T=logs(-20, -14), n0=logs(14, 26),
    x0=logs(-6, 3), eta_phys=logs(-10, -2), j0=logs(0, 10), B0=logs(-4, 1))
scale = logs(-3, 3)


def close(a, b, rel=1e-12):
    return math.isclose(a, b, rel_tol=rel)


class TestAnchoredCases:
    @pytest.mark.parametrize("pair,label", [
        ((1e-3, 1e-3), RegimeLabel.IdealMHD),
        ((1.0, 1e-3), RegimeLabel.HallMHD),
        ((1.0, 1.0), RegimeLabel.ResistiveHallMHD),
    ])
    def test_anchored_cases(self, pair, label):
        assert classify_regime(pair) is label

    @pytest.mark.parametrize("pair,label", [
        ((1e-3, 1.0), RegimeLabel.ResistiveMHD),
        ((50.0, 1e-3), RegimeLabel.Indeterminate),
        ((1.0, 50.0), RegimeLabel.Indeterminate),
        ((0.1, 10.0), RegimeLabel.ResistiveHallMHD),
    ])
    def test_remaining_bands(self, pair, label):
        assert classify_regime(pair) is label

    @pytest.mark.parametrize("th", [0.0, 1.0, -0.5, 2.0])
    def test_threshold_domain(self, th):
        with pytest.raises(ValueError):
            classify_regime((1.0, 1.0), th)


class TestGroups:
    def test_constants_are_codata(self):
        assert sc.EPS0 * sc.MU0 * sc.C_LIGHT**2 == pytest.approx(1.0, rel=1e-9)
        assert sc.E_CHARGE == C.e

    def test_hydrogen_mass_ratio(self):
        g = compute_groups(PhysicalParams(m_e=C.m_e, m_i=C.m_p))
        assert g.eps2 == pytest.approx(1 / 1836.15267, rel=1e-8)
        assert round(g.eps2, 7) == pytest.approx(5.446e-4, abs=1e-7)

    def test_collisionless(self):
        g = compute_groups(replace(PhysicalParams(), eta_phys=0.0))
        assert g.beta == 0.0
        assert classify_regime(g) in (RegimeLabel.IdealMHD, RegimeLabel.HallMHD,
                                      RegimeLabel.Indeterminate)

    def test_direct_formulas(self):
        p = PhysicalParams()
        g = compute_groups(p)
        u0 = math.sqrt(p.T / p.m_i)
        E0 = u0 * C.mu_0 * p.j0 * p.x0
        assert g.alpha2 == pytest.approx(C.e * E0 * p.x0 / p.T, rel=1e-14)
        assert g.beta == pytest.approx(C.e**2 * p.eta_phys * p.n0 * u0 * p.x0 / p.T, rel=1e-14)
        assert g.gamma == pytest.approx(u0 / C.c, rel=1e-14)
        assert g.lambda2 == pytest.approx(C.epsilon_0 * p.T / (C.e**2 * p.n0 * p.x0**2), rel=1e-14)
        assert g.eta_ratio == pytest.approx(p.j0 / (C.e * p.n0 * u0), rel=1e-14)

    def test_doubling_length(self):
        p = PhysicalParams(B0=0.1)
        a = compute_groups(p, "given")
        b = compute_groups(replace(p, x0=2 * p.x0), "given")
        assert b.beta == pytest.approx(2 * a.beta)
        assert b.alpha2 == pytest.approx(2 * a.alpha2)
        assert b.lambda2 == pytest.approx(a.lambda2 / 4)
        # with the Ampere closure E0 itself grows with x0
        a, b = compute_groups(p), compute_groups(replace(p, x0=2 * p.x0))
        assert b.alpha2 == pytest.approx(4 * a.alpha2)

    @pytest.mark.parametrize("field,value", [("T", 0.0), ("n0", -1.0), ("x0", math.inf),
                                             ("m_i", 0.0), ("eta_phys", -1e-3), ("B0", 0.0)])
    def test_domain(self, field, value):
        with pytest.raises(DimensionError):
            replace(PhysicalParams(), **{field: value})

    def test_given_closure_needs_b0(self):
        with pytest.raises(DimensionError):
            compute_groups(PhysicalParams(), "given")
        with pytest.raises(ValueError):
            compute_groups(PhysicalParams(), "magic")


class TestDimensionalAnalysis:
    @PROPS
    @given(params)
    def test_ampere_closure(self, p):
        g = compute_groups(p, "ampere")
        # eps0 mu0 c^2 = 1 holds to ~1e-10 for CODATA constants
        assert close(g.ampere_coefficient, 1.0, 1e-9)
        assert close(g.alpha2 * g.lambda2 / g.gamma**2, g.eta_ratio, 1e-9)
        assert close(g.E0, g.u0 * g.B0)

    @PROPS
    @given(params)
    def test_lorentz_closure(self, p):
        g = compute_groups(p, "lorentz")
        assert close(g.lorentz_coefficient, 1.0, 1e-9)

    @PROPS
    @given(params)
    def test_derived_fields(self, p):
        g = compute_groups(p)
        assert close(g.inv_alpha2 * g.alpha2, 1.0, 1e-14)
        assert close(g.beta_over_alpha4 * g.alpha2**2, g.beta, 1e-14) or g.beta == 0
        assert all(v > 0 for v in (g.eps2, g.alpha2, g.beta, g.gamma, g.lambda2, g.eta_ratio))

    @PROPS
    @given(params, scale)
    def test_length_rescaling(self, p, s):
        a = compute_groups(p, "given")
        b = compute_groups(replace(p, x0=s * p.x0), "given")
        assert close(b.alpha2, s * a.alpha2)
        assert close(b.beta, s * a.beta)
        assert close(b.lambda2, a.lambda2 / s**2)
        assert (b.eps2, b.gamma, b.eta_ratio) == (a.eps2, a.gamma, a.eta_ratio)

    @PROPS
    @given(params, scale)
    def test_mass_and_temperature_rescaling(self, p, s):
        # T and both masses scaled together keep u0, so only T-weighted groups move
        a = compute_groups(p, "given")
        b = compute_groups(replace(p, T=s * p.T, m_i=s * p.m_i, m_e=s * p.m_e), "given")
        assert close(b.u0, a.u0) and close(b.eps2, a.eps2)
        assert close(b.alpha2, a.alpha2 / s)
        assert close(b.beta, a.beta / s)
        assert close(b.lambda2, s * a.lambda2)
        assert close(b.gamma, a.gamma) and close(b.eta_ratio, a.eta_ratio)

    @PROPS
    @given(params, scale)
    def test_density_and_current_rescaling(self, p, s):
        a = compute_groups(p, "ampere")
        b = compute_groups(replace(p, n0=s * p.n0, j0=s * p.j0), "ampere")
        assert close(b.eta_ratio, a.eta_ratio)
        assert close(b.alpha2, s * a.alpha2)
        assert close(b.beta, s * a.beta)
        assert close(b.lambda2, a.lambda2 / s)

    @PROPS
    @given(logs(-4, 4), logs(-4, 4), params, st.sampled_from([0.05, 0.1, 0.2]))
    def test_classification_depends_on_two_ratios(self, a, b, p, th):
        # stay clear of band edges, where round-off in a forged group decides
        for v in (a, b):
            assume(min(abs(math.log(v / th)), abs(math.log(v * th))) > 1e-9)
        g = replace(compute_groups(p), alpha2=1 / a, beta=b / a**2)
        label = classify_regime(g, th)
        assert label is classify_regime((a, b), th)
        band = lambda v: "s" if v < th else ("u" if v <= 1 / th else "l")  # noqa: E731
        oracle = {"ss": RegimeLabel.IdealMHD, "su": RegimeLabel.ResistiveMHD,
                  "us": RegimeLabel.HallMHD, "uu": RegimeLabel.ResistiveHallMHD}
        assert label is oracle.get(band(a) + band(b), RegimeLabel.Indeterminate)


class TestParamFile:
    def test_round_trip(self):
        text = "# hydrogen\nT = 1.6e-17\nn0 = 1e19\nx0 = 0.1  # m\nclosure = lorentz\nthreshold = 0.05\n"
        p, closure, th = sc.parse_params(text)
        assert p.T == 1.6e-17 and p.n0 == 1e19 and p.x0 == 0.1
        assert closure == "lorentz" and th == 0.05

    def test_collects_errors(self):
        with pytest.raises(ConfigError) as info:
            sc.parse_params("T = hot\nmass = 3\nnonsense\nclosure = fancy\n")
        assert len(info.value.errors) == 4
        assert info.value.errors[0].startswith("line 1")

    def test_domain_error_reported(self):
        with pytest.raises(ConfigError):
            sc.parse_params("T = -1\n")
