import json

import numpy as np
import pytest

from skewmix.distributions import MixtureModel, MsnParams, SnParams, mixture_pdf, mixture_sample, pdf, sample
from skewmix.errors import DegenerateDataError, PreconditionError
from skewmix.estimation import (
    EmOptions,
    EstimationResult,
    dump_result,
    estimate_alpha_known_both,
    estimate_alpha_unknown_f0,
    golden_section_max,
    load_result,
    load_sample,
    restart_inits,
    sample_to_csv,
)
from skewmix.identifiability import Verdict, check_identifiable
from skewmix.rng import make_rng

SEPARATED = MixtureModel(0.3, SnParams(3, 1, 0), SnParams(0, 1, 2))
EM_FIXTURE = MixtureModel(0.3, SnParams(0, 1, 1), SnParams(4, 1, -2))


def _draw(model, seed, n=10_000):
    return mixture_sample(model, make_rng(seed), n)


@pytest.fixture(scope="module")
def em_sample():
    return _draw(EM_FIXTURE, 7)


class TestGoldenSection:
    def test_quadratic(self):
        x, fx, trace = golden_section_max(lambda a: -(a - 0.37) ** 2, 0.0, 1.0)
        assert x == pytest.approx(0.37, abs=1e-9)
        assert fx == pytest.approx(0.0, abs=1e-15)
        assert all(b >= a for a, b in zip(trace, trace[1:]))

    def test_boundary_optimum(self):
        x, _, _ = golden_section_max(lambda a: a, 0.0, 1.0)
        assert x == 1.0


class TestKnownBoth:
    def test_fixture(self):
        res = estimate_alpha_known_both(_draw(SEPARATED, 0), SEPARATED.known, SEPARATED.unknown)
        assert abs(res.alpha_hat - 0.3) <= 0.03
        assert res.converged
        assert res.identifiability_check.verdict is Verdict.IDENTIFIABLE

    def test_pure_known_component(self):
        x = sample(SEPARATED.known, make_rng(3), 10_000)
        res = estimate_alpha_known_both(x, SEPARATED.known, SEPARATED.unknown)
        assert res.alpha_hat >= 0.95

    def test_identical_components(self):
        f = SnParams(0, 1, 1)
        x = sample(f, make_rng(4), 2_000)
        res = estimate_alpha_known_both(x, f, f)
        assert res.identifiability_check.verdict is Verdict.DEGENERATE
        assert 0.0 < res.alpha_hat < 1.0

    def test_alpha_in_open_interval(self):
        x = sample(SEPARATED.unknown, make_rng(5), 2_000)
        res = estimate_alpha_known_both(x, SEPARATED.known, SEPARATED.unknown)
        assert 0.0 < res.alpha_hat <= 1e-2

    def test_mae_shrinks_with_n(self):
        def mae(n):
            errs = []
            for seed in range(20):
                x = mixture_sample(SEPARATED, make_rng(seed, stream=n), n)
                errs.append(abs(estimate_alpha_known_both(x, SEPARATED.known, SEPARATED.unknown).alpha_hat - 0.3))
            return np.mean(errs)

        assert mae(10_000) < mae(1_000)

    def test_multivariate(self):
        f1 = MsnParams(np.array([2.0, 0.0]), np.eye(2), np.array([1.0, -1.0]))
        f0 = MsnParams(np.array([-1.0, 1.0]), np.diag([1.0, 2.0]), np.zeros(2))
        x = mixture_sample(MixtureModel(0.6, f1, f0), make_rng(6), 5_000)
        res = estimate_alpha_known_both(x, f1, f0)
        assert abs(res.alpha_hat - 0.6) < 0.03

    def test_degenerate_data(self):
        with pytest.raises(DegenerateDataError):
            estimate_alpha_known_both(np.full(10, 1.5), SEPARATED.known, SEPARATED.unknown)

    @pytest.mark.parametrize("bad", [np.array([]), np.array([1.0, np.nan]), np.zeros((3, 2))])
    def test_bad_sample(self, bad):
        with pytest.raises(PreconditionError):
            estimate_alpha_known_both(bad, SEPARATED.known, SEPARATED.unknown)


class TestEm:
    def test_fixture_and_monotone(self, em_sample):
        res = estimate_alpha_unknown_f0(em_sample, EM_FIXTURE.known)
        assert abs(res.alpha_hat - 0.3) <= 0.05
        assert res.converged
        assert np.all(np.diff(res.trace) >= -1e-10 * np.abs(res.trace[1:]).clip(1))
        assert res.identifiability_check.verdict is Verdict.IDENTIFIABLE
        assert res.f0_hat.mu == pytest.approx(4.0, abs=0.1)

    @pytest.mark.slow
    def test_fixture_median_over_seeds(self):
        errs = []
        for seed in range(20):
            res = estimate_alpha_unknown_f0(_draw(EM_FIXTURE, seed), EM_FIXTURE.known)
            assert np.all(np.diff(res.trace) >= -1e-10 * np.abs(res.trace[1:]).clip(1))
            errs.append(abs(res.alpha_hat - 0.3))
        assert np.median(errs) <= 0.05

    def test_restarts_agree(self, em_sample):
        alphas = []
        for init in restart_inits(em_sample, 5):
            res = estimate_alpha_unknown_f0(em_sample, EM_FIXTURE.known, init=init)
            assert np.all(np.diff(res.trace) >= -1e-10 * np.abs(res.trace[1:]).clip(1))
            alphas.append(res.alpha_hat)
        assert np.ptp(alphas) <= 0.02

    def test_condition_violating_pair_runs(self):
        model = MixtureModel(0.3, SnParams(0, 1, 1), SnParams(4, 1, 1))
        assert check_identifiable(model.unknown, model.known).verdict is Verdict.CONDITION_VIOLATED
        res = estimate_alpha_unknown_f0(_draw(model, 11, 3_000), model.known, init=SnParams(4, 1, 1))
        assert 0.0 < res.alpha_hat < 1.0
        # the attached report concerns the fitted f0, whose Gamma is not exactly Gamma1
        assert res.identifiability_check.to_dict() == check_identifiable(res.f0_hat, model.known).to_dict()

    def test_pure_known_sample_fits_known_density(self):
        # alpha is not pinned down here: f0_hat may copy f1, so only the fitted density is checked
        f1 = EM_FIXTURE.known
        x = sample(f1, make_rng(0), 10_000)
        res = estimate_alpha_unknown_f0(x, f1, options=EmOptions(max_iter=200))
        grid = np.linspace(-4, 5, 400)
        fit = mixture_pdf(MixtureModel(res.alpha_hat, f1, res.f0_hat), grid)
        assert np.max(np.abs(fit - pdf(f1, grid))) < 0.02
        assert res.alpha_hat > 0.5

    def test_iteration_cap(self, em_sample):
        res = estimate_alpha_unknown_f0(em_sample, EM_FIXTURE.known, options=EmOptions(max_iter=2))
        assert not res.converged
        assert res.n_iter == 2 and len(res.trace) == 3

    def test_preconditions(self, em_sample):
        f1 = EM_FIXTURE.known
        with pytest.raises(PreconditionError):
            estimate_alpha_unknown_f0(em_sample, f1, family="msn")
        with pytest.raises(PreconditionError):
            estimate_alpha_unknown_f0(em_sample, f1, init=MsnParams(np.zeros(1), np.eye(1), np.zeros(1)))
        with pytest.raises(PreconditionError):
            estimate_alpha_unknown_f0(em_sample, f1, options=EmOptions(alpha_init=1.0))
        with pytest.raises(PreconditionError):
            SnParams(0.0, -1.0, 0.0)


class TestIo:
    def test_result_roundtrip(self, tmp_path, em_sample):
        res = estimate_alpha_unknown_f0(em_sample[:2000], EM_FIXTURE.known, options=EmOptions(max_iter=20))
        path = tmp_path / "res.json"
        dump_result(res, path)
        back = load_result(path)
        assert isinstance(back, EstimationResult)
        assert back.to_dict() == res.to_dict()
        assert json.loads(path.read_text())["alpha_hat"] == res.alpha_hat

    def test_sample_csv_roundtrip(self, tmp_path):
        x = _draw(SEPARATED, 1, 50)
        path = tmp_path / "x.csv"
        path.write_text(sample_to_csv(x))
        assert np.array_equal(load_sample(path), x)

    def test_headerless_multicolumn(self, tmp_path):
        path = tmp_path / "x.csv"
        path.write_text("1.0,2.0\n3.0,4.5\n")
        assert np.array_equal(load_sample(path), [[1.0, 2.0], [3.0, 4.5]])

    @pytest.mark.parametrize("text", ["", "x\n", "x\n1.0\nfoo\n"])
    def test_bad_csv(self, tmp_path, text):
        path = tmp_path / "x.csv"
        path.write_text(text)
        with pytest.raises(PreconditionError):
            load_sample(path)
