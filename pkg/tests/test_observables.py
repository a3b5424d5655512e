import numpy as np
import pytest

from fockskin.model import BasisSpec, ModelParams
from fockskin.eigensystem import analytic_eigenset
from fockskin.observables import (cell_mean, ipr, mean_position, skin_shift,
                                  support_interval)


class TestIpr:
    def test_single_site(self):
        assert ipr(np.array([0, 0, 1.0, 0])) == pytest.approx(1.0)

    def test_uniform(self):
        assert ipr(np.ones(8)) == pytest.approx(1 / 8)

    def test_phase_and_scale_invariance(self):
        rng = np.random.default_rng(7)
        v = rng.normal(size=20) + 1j * rng.normal(size=20)
        base = ipr(v)
        assert ipr(3.7 * v) == pytest.approx(base, rel=1e-14)
        assert ipr(np.exp(1j * 0.9) * v) == pytest.approx(base, rel=1e-14)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            ipr(np.zeros(4))


class TestMeanPosition:
    def test_cell_mean_basic(self):
        assert cell_mean(np.array([0.0, 0.0, 2.0])) == pytest.approx(2.0)
        assert cell_mean(np.array([1.0, 0.0, 1.0])) == pytest.approx(1.0)

    def test_basis_state(self):
        basis = BasisSpec(10)
        assert mean_position(basis.basis_state("e", 6), basis) == pytest.approx(6.0)

    def test_unnormalized(self):
        basis = BasisSpec(5)
        assert mean_position(5.0 * basis.basis_state("g", 2), basis) == pytest.approx(2.0)

    def test_increases_with_mode_index(self):
        eig = analytic_eigenset(ModelParams(j1=1.5), 20)
        means = [mean_position(eig.mode(n, "plus").right, eig.basis)
                 for n in range(20)]
        assert np.all(np.diff(means) > 0)


class TestSupportInterval:
    def test_delta(self):
        p = np.zeros(10); p[4] = 1.0
        assert support_interval(p) == (4, 4)

    def test_uniform_full_mass(self):
        lo, hi = support_interval(np.ones(10), mass=1.0)
        assert (lo, hi) == (0, 9)

    def test_uniform_partial(self):
        lo, hi = support_interval(np.ones(10), mass=0.5)
        assert hi - lo == 4

    def test_picks_heavy_block(self):
        p = np.array([0.01, 0.01, 0.48, 0.48, 0.01, 0.01])
        lo, hi = support_interval(p, mass=0.9)
        assert (lo, hi) == (2, 3)

    def test_zero_rejected(self):
        with pytest.raises(ValueError):
            support_interval(np.zeros(5))


class TestSkinShift:
    def test_self_shift_zero(self, eigensets_j1_15):
        eig = eigensets_j1_15["j3_0"]
        assert np.allclose(skin_shift(eig, eig), 0.0)

    def test_mismatched_mode_sets(self):
        a = analytic_eigenset(ModelParams(j1=1.5), 4)
        b = analytic_eigenset(ModelParams(j1=1.5), 6)
        with pytest.raises(ValueError, match="mismatched mode sets"):
            skin_shift(a, b)

    def test_skin_direction(self, eigensets_j1_15):
        left = skin_shift(eigensets_j1_15["phi_plus"], eigensets_j1_15["j3_0"])
        right = skin_shift(eigensets_j1_15["phi_minus"], eigensets_j1_15["j3_0"])
        # interior modes shift left for phi=+pi/2 and right for -pi/2
        assert np.all(left[1:81] < 0)
        assert np.all(right[1:81] > 0)


class TestConfinement:
    def test_skewed_modes_stay_within_reference_support(self, eigensets_j1_15):
        """Non-reciprocity rearranges weight inside each mode's footprint."""
        ref = eigensets_j1_15["j3_0"]
        for tag in ("phi_plus", "phi_minus"):
            skew = eigensets_j1_15[tag]
            for n in range(0, 40, 5):
                p_ref = ref.basis.cell_probabilities(ref.mode(n, "plus").right)
                p_skew = skew.basis.cell_probabilities(skew.mode(n, "plus").right)
                lo_r, hi_r = support_interval(p_ref, mass=0.999)
                lo_s, hi_s = support_interval(p_skew, mass=0.99)
                pad = 3
                assert lo_s >= lo_r - pad and hi_s <= hi_r + pad

    def test_ipr_contrast_largest_near_zero_energy(self):
        # deep in the topological regime the low modes sharpen the most
        base = analytic_eigenset(ModelParams(j1=0.6), 40)
        skin = analytic_eigenset(ModelParams(j1=0.6, j3=3.0, phi=np.pi / 2), 40)
        delta = {}
        for n in (0, 10, 30):
            delta[n] = (ipr(skin.mode(n, "plus").right)
                        - ipr(base.mode(n, "plus").right))
        zm_delta = ipr(skin.mode(0, "zero").right) - ipr(base.mode(0, "zero").right)
        assert zm_delta > max(delta.values())
