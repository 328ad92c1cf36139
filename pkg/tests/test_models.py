import hashlib
import math
from importlib import resources

import numpy as np
import pytest
from scipy import integrate
from scipy.stats import gamma

from conftest import brute_force_log_z
from evidencer.kernels import LinRegState, LogisticState, MixtureState
from evidencer.models import (DatasetError, MODEL_IDS, galaxy_model, get_model, load_dataset,
                              pima_model, radiata_log_z, radiata_model, standardise)
from evidencer.models.base import CHECKSUMS, ROW_COUNTS, read_table
from evidencer.models.galaxy import prior_expected_log_likelihood


class TestDatasets:
    @pytest.mark.parametrize("name", sorted(CHECKSUMS))
    def test_checksum_and_rows(self, name):
        raw = resources.files("evidencer.models").joinpath("data", name).read_bytes()
        assert hashlib.sha256(raw).hexdigest() == CHECKSUMS[name]
        cols = load_dataset(name)
        assert all(v.size == ROW_COUNTS[name] for v in cols.values())

    def test_tampered_bytes_rejected(self):
        with pytest.raises(DatasetError, match="checksum mismatch"):
            read_table(b"velocity\n1.0\n", "galaxy.csv", 1, CHECKSUMS["galaxy.csv"])

    def test_row_count_checked(self):
        with pytest.raises(DatasetError, match="expected 3 rows"):
            read_table(b"a,b\n1,2\n", "x.csv", 3)

    def test_non_numeric(self):
        with pytest.raises(DatasetError, match="non-numeric"):
            read_table(b"a\nfoo\n", "x.csv")

    def test_unknown_dataset(self):
        with pytest.raises(DatasetError):
            load_dataset("iris.csv")

    def test_pima_outcome_is_binary(self):
        d = load_dataset("pima.csv")
        assert set(np.unique(d["diabetes"])) == {0.0, 1.0}


class TestRadiata:
    def test_prior_parameters(self):
        p = radiata_model(1).prior
        np.testing.assert_array_equal(p.mean, [3000, 185])
        np.testing.assert_array_equal(np.diag(p.precision), [0.06, 6])
        assert (p.shape, p.rate) == (3, 180000)

    @pytest.mark.parametrize("which", [0, 3])
    def test_bad_model(self, which):
        with pytest.raises(ValueError, match="1 or 2"):
            radiata_model(which)
        with pytest.raises(ValueError):
            radiata_log_z(which, 1.0)

    def test_zero_temperature(self):
        assert radiata_log_z(1, 0.0) == pytest.approx(0.0, abs=1e-12)
        assert radiata_log_z(2, 0.0) == pytest.approx(0.0, abs=1e-12)

    @pytest.mark.parametrize("which,expected", [(1, -310.1283), (2, -301.7046)])
    def test_evidence(self, which, expected):
        assert radiata_log_z(which, 1.0) == pytest.approx(expected, abs=5e-5)

    @pytest.mark.parametrize("which", [1, 2])
    def test_brute_force_oracle(self, which):
        assert abs(radiata_log_z(which, 1.0) - brute_force_log_z(radiata_model(which))) < 1e-6

    def test_derivative_increasing(self):
        t = np.linspace(0, 1, 41)
        d = np.diff([radiata_log_z(1, s) for s in t]) / np.diff(t)
        assert np.all(np.diff(d) > 0)

    def test_prior_sample_mean(self):
        model = radiata_model(1)
        rng = np.random.default_rng(0)
        alpha = np.array([model.prior_sample(rng).coef[0] for _ in range(100_000)])
        assert abs(alpha.mean() - 3000) < 5 * alpha.std() / math.sqrt(alpha.size)

    def test_log_prior_normalised(self):
        model = radiata_model(1)
        # integrate over alpha with the other parameters fixed at their prior modes
        tau = (model.prior.shape - 1) / model.prior.rate

        def f(a):
            return math.exp(model.log_prior(LinRegState(np.array([a, 185.0]), tau)))

        val, _ = integrate.quad(f, -30000, 36000, points=[3000], limit=200)
        g = gamma.pdf(tau, model.prior.shape, scale=1 / model.prior.rate)
        beta_density = math.sqrt(tau * 6 / (2 * math.pi))
        assert val == pytest.approx(g * beta_density, rel=1e-6)


class TestPima:
    @pytest.mark.parametrize("which,dim", [(1, 5), (2, 6)])
    def test_dimension(self, which, dim):
        assert pima_model(which).dim == dim

    def test_log_prior_at_origin(self):
        model = pima_model(2)
        assert model.log_prior(LogisticState(np.zeros(6))) == pytest.approx(3 * (math.log(0.01) - math.log(2 * math.pi)))

    def test_standardise_idempotent(self):
        x = np.random.default_rng(1).gamma(2.0, 3.0, size=(50, 4))
        once = standardise(x)
        np.testing.assert_allclose(standardise(once), once, atol=1e-12)

    def test_design_standardised(self):
        X = pima_model(2).data.X
        np.testing.assert_array_equal(X[:, 0], 1.0)
        np.testing.assert_allclose(X[:, 1:].mean(axis=0), 0, atol=1e-12)
        np.testing.assert_allclose(X[:, 1:].std(axis=0), 1, atol=1e-12)

    def test_bad_model(self):
        with pytest.raises(ValueError):
            pima_model(3)

    def test_reference_values(self):
        assert pima_model(1).reference_log_evidence == -257.2342
        assert pima_model(2).reference_log_evidence == -259.8519


class TestGalaxy:
    def test_units(self):
        y = galaxy_model(3).y
        assert y.size == 82 and 9 < y.min() < y.max() < 35

    @pytest.mark.parametrize("k", [0, 11, 2.5])
    def test_bad_component_count(self, k):
        with pytest.raises(ValueError):
            galaxy_model(k)

    def test_prior_weight_mean(self):
        model = galaxy_model(4)
        rng = np.random.default_rng(2)
        w = np.array([model.prior_sample(rng).weights for _ in range(20000)])
        np.testing.assert_allclose(w.mean(axis=0), 0.25, atol=0.01)

    def test_prior_expected_log_likelihood(self):
        model = galaxy_model(3)
        rng = np.random.default_rng(3)
        ll = np.array([model.log_likelihood(model.prior_sample(rng)) for _ in range(100_000)])
        exact = prior_expected_log_likelihood(model.y, model.prior)
        assert abs(ll.mean() - exact) < 5 * ll.std() / math.sqrt(ll.size)
        assert -4.5e5 < exact < -4.1e5

    def test_log_prior_includes_allocations(self):
        model = galaxy_model(2)
        s = model.prior_sample(np.random.default_rng(0))
        moved = MixtureState(s.weights, s.means, s.variances, np.zeros_like(s.allocations))
        n0 = np.count_nonzero(s.allocations == 0)
        diff = model.log_prior(moved) - model.log_prior(s)
        assert diff == pytest.approx((82 - n0) * (math.log(s.weights[0]) - math.log(s.weights[1])))


class TestRegistry:
    @pytest.mark.parametrize("model_id", MODEL_IDS)
    def test_lookup(self, model_id):
        m = get_model(model_id)
        assert m.name == model_id and m.reference_log_evidence is not None

    @pytest.mark.parametrize("model_id", ["radiata", "probit1", "galaxyx"])
    def test_unknown(self, model_id):
        with pytest.raises(ValueError, match="unknown model"):
            get_model(model_id)
