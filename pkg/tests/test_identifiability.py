import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from helpers import (
    equal_gamma_cfusn_pair,
    random_cfusn,
    random_msn,
    random_sn,
    random_spd,
    random_witness_pair,
    well_projected_direction,
)
from skewmix.distributions import CfusnParams, MsnParams, SnParams, gamma_matrix, mixture_pdf
from skewmix.errors import PreconditionError, WitnessSearchError
from skewmix.identifiability import (
    CLAUSE_EQUAL,
    CLAUSE_RANK1,
    IdentifiabilityReport,
    LimitVerdict,
    RatioTrace,
    Theorem,
    Transform,
    Verdict,
    check_identifiable,
    construct_confusable_mixture,
    direction_partition,
    dump_report,
    dump_trace,
    find_witness_vector,
    load_report,
    load_trace,
    trace_to_csv,
    v_rate,
    verify_ratio_limit,
    xi_from_partition,
    xi_value,
)
from skewmix.numerics import SQRT_2_OVER_PI, PsdClass

LOG_1E_12 = math.log(1e-12)


def _cfusn(gamma, lam, mu=None):
    gamma = np.asarray(gamma, dtype=float)
    lam = np.asarray(lam, dtype=float)
    mu = np.zeros(gamma.shape[0]) if mu is None else mu
    return CfusnParams(mu, gamma + lam @ lam.T, lam)


class TestCheck:
    def test_sn_identifiable(self):
        rep = check_identifiable(SnParams(0, 1, 0), SnParams(0, 1, 1))
        assert rep.verdict is Verdict.IDENTIFIABLE
        assert rep.theorem is Theorem.SN
        assert rep.transform is Transform.CF
        assert rep.gamma_diff_class.min_eigenvalue == pytest.approx(0.5)

    def test_sn_equal_gamma(self):
        rep = check_identifiable(SnParams(2, 1, 1), SnParams(0, 1, 1))
        assert rep.verdict is Verdict.CONDITION_VIOLATED
        assert rep.violated_clause == CLAUSE_EQUAL

    def test_sn_mgf_branch_direction(self):
        # Gamma0 < Gamma1 with Delta0 > 0: direction must make Delta0 t <= 0
        rep = check_identifiable(SnParams(0, 1, 2), SnParams(0, 3, 0))
        assert rep.transform is Transform.MGF
        assert rep.witness[0] < 0

    def test_degenerate(self):
        f = SnParams(0.3, 1.2, -0.7)
        rep = check_identifiable(f, SnParams(0.3, 1.2, -0.7))
        assert rep.verdict is Verdict.DEGENERATE

    def test_tolerance_band_scales_with_gamma1(self):
        f1 = SnParams(0, 100.0, 0)  # Gamma1 = 1e4
        f0 = SnParams(5.0, math.sqrt(1e4 + 5e-6), 0)
        assert check_identifiable(f0, f1).verdict is Verdict.CONDITION_VIOLATED
        assert check_identifiable(f0, f1).tolerance_used == pytest.approx(1e-5)
        assert check_identifiable(f0, f1, tol=1e-12).verdict is Verdict.IDENTIFIABLE

    def test_cfusn_rank_one_exclusion(self):
        g0 = np.eye(2)
        f0 = _cfusn(g0, np.eye(2))
        f1 = _cfusn(g0 + 0.5 * np.diag([1.0, 0.0]), np.eye(2))
        rep = check_identifiable(f0, f1)
        assert rep.verdict is Verdict.CONDITION_VIOLATED
        assert rep.violated_clause.startswith(CLAUSE_RANK1)

    def test_cfusn_rank_one_off_column_is_fine(self):
        v = np.array([1.0, 1.0]) / math.sqrt(2)
        f0 = _cfusn(np.eye(2), np.eye(2))
        f1 = _cfusn(np.eye(2) + 0.5 * np.outer(v, v), np.eye(2))
        rep = check_identifiable(f0, f1)
        assert rep.verdict is Verdict.IDENTIFIABLE
        t = rep.witness
        assert abs(t @ (gamma_matrix(f0) - gamma_matrix(f1)) @ t) > 1e-9

    def test_cfusn_negative_rank_one_identifiable(self):
        # Gamma1 - Gamma0 = -k vv' has the wrong sign for the exclusion
        f0 = _cfusn(np.eye(2) + 0.5 * np.diag([1.0, 0.0]), np.eye(2))
        f1 = _cfusn(np.eye(2), np.eye(2))
        assert check_identifiable(f0, f1).verdict is Verdict.IDENTIFIABLE

    def test_msn_cf_witness(self, rng):
        f1 = random_msn(rng)
        om = f1.omega_mat + np.eye(2)
        f0 = MsnParams(f1.mu, om, np.zeros(2))
        rep = check_identifiable(f0, f1)
        assert rep.verdict is Verdict.IDENTIFIABLE
        if rep.transform is Transform.CF:
            t = rep.witness
            assert t @ (gamma_matrix(f0) - gamma_matrix(f1)) @ t > 0

    def test_mismatch_raises(self):
        with pytest.raises(PreconditionError):
            check_identifiable(SnParams(0, 1, 0), MsnParams(np.zeros(2), np.eye(2), np.zeros(2)))
        with pytest.raises(PreconditionError):
            check_identifiable(SnParams(0, 1, 0), SnParams(0, 1, 1), tol=0.0)

    def test_violation_requires_clause(self):
        klass = PsdClass.from_dict({"label": "PositiveSemidefiniteSingular", "min_eigenvalue": 0.0, "max_eigenvalue": 0.0})
        with pytest.raises(PreconditionError):
            IdentifiabilityReport(Verdict.CONDITION_VIOLATED, Theorem.SN, klass, 1e-9)

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000))
    def test_sn_witness_drives_ratio_to_zero(self, seed):
        rng = np.random.default_rng(seed)
        f0, f1 = random_sn(rng), random_sn(rng)
        assume(abs(gamma_matrix(f0)[0, 0] - gamma_matrix(f1)[0, 0]) > 0.1)
        rep = check_identifiable(f0, f1)
        res = verify_ratio_limit(f0, f1, rep.witness, rep.transform, c_grid=np.linspace(1, 100, 100))
        assert res.trace.log_abs_ratio[-1] < LOG_1E_12

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000))
    def test_msn_witness_drives_ratio_to_zero(self, seed):
        rng = np.random.default_rng(seed)
        f0, f1 = random_msn(rng), random_msn(rng)
        assume(np.max(np.abs(gamma_matrix(f0) - gamma_matrix(f1))) > 0.1)
        rep = check_identifiable(f0, f1)
        res = verify_ratio_limit(f0, f1, rep.witness, rep.transform)
        assert res.verdict is LimitVerdict.TO_ZERO
        assert res.agrees


class TestWitness:
    def test_identity(self):
        t = find_witness_vector(np.eye(2), np.eye(2))
        assert np.allclose(np.abs(t), [1.0, 0.0])

    def test_perturbation_branch(self):
        a, b = np.diag([1.0, -1.0]), np.diag([0.0, 1.0])
        t = find_witness_vector(a, b)
        assert abs(t[0]) == pytest.approx(1.0)
        assert t[1] != 0
        assert t @ a @ t > 0
        assert t @ b @ t == pytest.approx(t[1] ** 2)

    def test_semidefinite_a(self):
        a, b = np.diag([1.0, 0.0]), np.diag([0.0, 1.0])
        t = find_witness_vector(a, b)
        assert t @ a @ t > 1e-9 and abs(t @ b @ t) > 1e-9
        # oracle: such t exists on the unit circle
        th = np.linspace(0, 2 * np.pi, 3601)
        u = np.column_stack([np.cos(th), np.sin(th)])
        ok = (np.einsum("ij,jk,ik->i", u, a, u) > 0) & (np.abs(np.einsum("ij,jk,ik->i", u, b, u)) > 0)
        assert ok.any()

    @pytest.mark.parametrize("a,b", [
        (np.zeros((2, 2)), np.eye(2)),
        (-np.eye(2), np.eye(2)),
        (np.eye(2), np.zeros((2, 2))),
    ])
    def test_unsatisfiable(self, a, b):
        with pytest.raises(WitnessSearchError):
            find_witness_vector(a, b)

    @settings(max_examples=100, deadline=None)
    @given(st.integers(0, 1_000_000))
    def test_soundness(self, seed):
        a, b = random_witness_pair(np.random.default_rng(seed))
        t = find_witness_vector(a, b)
        assert t @ a @ t > 1e-9
        assert abs(t @ b @ t) > 1e-9


class TestPartition:
    def test_two_cells(self):
        p = direction_partition([[1, 0], [2, 0], [0, 1]])
        assert [c.members for c in p.cells] == [(0, 1), (2,)]
        assert np.allclose(p.cells[0].direction, [1, 0])

    def test_opposite_sign_same_cell(self):
        p = direction_partition([[1, 1], [-2, -2]])
        assert len(p.cells) == 1
        assert np.linalg.norm(p.cells[0].direction) == pytest.approx(1.0)

    def test_zero_cell(self):
        p = direction_partition([[0, 0], [1, 0]])
        assert len(p.cells) == 2
        zero = [c for c in p.cells if c.is_zero]
        assert len(zero) == 1 and zero[0].members == (0,)
        assert np.all(zero[0].direction == 0)
        assert p.cell_of(0) is zero[0]

    def test_matrix_columns(self):
        p = direction_partition(np.array([[1.0, 3.0, 0.0], [1.0, 3.0, 1.0]]))
        assert [c.members for c in p.cells] == [(0, 1), (2,)]

    def test_angle_tolerance(self):
        p = direction_partition([[1.0, 0.0], [1.0, 1e-6]])
        assert len(p.cells) == 2
        assert len(direction_partition([[1.0, 0.0], [1.0, 1e-12]]).cells) == 1

    def test_dimension_mismatch(self):
        with pytest.raises(PreconditionError):
            direction_partition([[1.0, 0.0], [1.0, 0.0, 0.0]])


def _matched(rng, k=3, n_dirs=2, counts=(2, 1)):
    """U, V whose columns share directions with equal per-cell counts."""
    dirs = rng.normal(size=(n_dirs, k))
    cols_u, cols_v = [], []
    for d, n in zip(dirs, counts):
        for _ in range(n):
            cols_u.append(rng.uniform(0.5, 2) * rng.choice([-1, 1]) * d)
            cols_v.append(rng.uniform(0.5, 2) * rng.choice([-1, 1]) * d)
    return np.array(cols_u).T, np.array(cols_v).T, dirs


class TestXi:
    def test_identical(self, rng):
        u = rng.normal(size=(3, 3))
        assert xi_value(u, u, rng.normal(size=3)) == pytest.approx(1.0)

    def test_scaled_column(self):
        e1 = np.array([[1.0], [0.0]])
        assert xi_value(2 * e1, e1, [1.0, 0.0]) == pytest.approx(0.5)

    def test_count_mismatch_exponent(self):
        u = np.array([[1.0, 0.0], [0.0, 1.0]])
        v = np.array([[1.0, 0.0], [0.0, 0.0]])
        t = np.array([0.5, 2.0])
        # one extra nonzero projection in U: factor i sqrt(2/pi) / (U_2't)
        assert xi_value(u, v, t) == pytest.approx(1j * SQRT_2_OVER_PI / 2.0)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000))
    def test_constant_over_directions(self, seed):
        rng = np.random.default_rng(seed)
        u, v, dirs = _matched(rng)
        ref = None
        for _ in range(100):
            t = rng.normal(size=3)
            if np.min(np.abs(dirs @ t)) < 1e-3:
                continue
            val = xi_value(u, v, t)
            ref = val if ref is None else ref
            assert abs(val - ref) <= 1e-9 * abs(ref)

    @settings(max_examples=30, deadline=None)
    @given(st.integers(0, 100_000))
    def test_partition_formula(self, seed):
        rng = np.random.default_rng(seed)
        u, v, _ = _matched(rng)
        t = rng.normal(size=3)
        a, b = xi_value(u, v, t), xi_from_partition(u, v, t)
        assert abs(a - b) <= 1e-10 * max(1.0, abs(a))

    def test_partition_formula_norm_ratio(self):
        u = np.array([[2.0, 0.0], [0.0, -3.0]])
        v = np.array([[-1.0, 0.0], [0.0, 6.0]])
        # per cell: signed |v| / signed |u|
        expected = (-1.0 / 2.0) * (6.0 / -3.0)
        assert xi_from_partition(u, v, [0.3, 0.9]) == pytest.approx(expected)

    def test_partition_formula_unequal_counts(self, rng):
        u, v, _ = _matched(rng, counts=(2, 1))
        v = v[:, :2]
        u = u[:, :3]
        t = rng.normal(size=3)
        assert xi_from_partition(u, v, t) == pytest.approx(xi_value(u, v, t), rel=1e-10)


class TestVRate:
    def test_identity(self, rng):
        th = random_cfusn(rng)
        z = v_rate(7.0, th, th, rng.normal(size=2))
        assert z.log_abs == 0.0 and z.phase == 0.0

    def test_quadratic_decay(self):
        lam = np.eye(2)
        th0 = _cfusn(2 * np.eye(2), lam)
        th1 = _cfusn(np.eye(2), lam)
        t = np.array([0.6, 0.8])
        for c in (1.0, 5.0, 30.0):
            z = v_rate(c, th0, th1, t)
            assert z.log_abs == pytest.approx(-0.5 * c * c)
            assert z.phase == 0.0

    def test_location_phase_and_count(self):
        th0 = _cfusn(np.eye(2), np.eye(2), mu=np.array([1.0, 0.0]))
        th1 = _cfusn(np.eye(2), np.diag([1.0, 0.0]))
        z = v_rate(3.0, th0, th1, [1.0, 1.0])
        assert z.phase == pytest.approx(3.0)
        assert z.log_abs == pytest.approx(-math.log(3.0))

    def test_rejects_nonpositive_c(self, rng):
        th = random_cfusn(rng)
        with pytest.raises(PreconditionError):
            v_rate(0.0, th, th, [1.0, 0.0])

    @settings(max_examples=40, deadline=None)
    @given(st.integers(0, 100_000), st.floats(0.1, 500))
    def test_composition(self, seed, c):
        rng = np.random.default_rng(seed)
        a, b, m = random_cfusn(rng), random_cfusn(rng), random_cfusn(rng)
        t = rng.normal(size=2)
        lhs = v_rate(c, a, b, t)
        rhs = v_rate(c, a, m, t) * v_rate(c, m, b, t)
        assert lhs.log_abs == pytest.approx(rhs.log_abs, abs=1e-9 * max(1.0, abs(lhs.log_abs)))
        assert lhs.phase == pytest.approx(rhs.phase, abs=1e-9 * max(1.0, abs(lhs.phase)))


class TestRatioLimit:
    def test_gaussian_cf_closed_form(self):
        res = verify_ratio_limit(SnParams(0, 2, 0), SnParams(0, 1, 0), [1.0], Transform.CF)
        c = res.trace.c_grid
        assert np.allclose(res.trace.log_abs_ratio, -1.5 * c**2, rtol=1e-12)
        assert res.verdict is LimitVerdict.TO_ZERO
        assert res.predicted is LimitVerdict.TO_ZERO

    def test_gaussian_mgf_closed_form(self):
        res = verify_ratio_limit(SnParams(0, 1, 0), SnParams(0, 2, 0), [-1.0], "MGF")
        c = res.trace.c_grid
        assert np.allclose(res.trace.log_abs_ratio, -1.5 * c**2, rtol=1e-12)
        assert res.verdict is LimitVerdict.TO_ZERO
        assert res.agrees

    def test_reverse_pair_diverges(self):
        res = verify_ratio_limit(SnParams(0, 1, 0), SnParams(0, 2, 0), [1.0], Transform.CF)
        assert res.verdict is LimitVerdict.TO_INF
        assert res.agrees

    def test_equal_gamma_bounded(self):
        res = verify_ratio_limit(SnParams(1.0, 1, 1), SnParams(0.0, 1, 1), [1.0], Transform.CF)
        assert res.verdict is LimitVerdict.BOUNDED_AWAY
        assert np.all(np.abs(res.trace.log_abs_ratio) < 1e-9)
        assert res.trace.phase[-1] == pytest.approx(res.trace.c_grid[-1])

    def test_cfusn_xi_limit(self, rng):
        f0, f1 = equal_gamma_cfusn_pair(rng)
        t = well_projected_direction(rng, [f0.lambda_mat, f1.lambda_mat])
        res = verify_ratio_limit(f0, f1, t, Transform.CF, c_grid=np.geomspace(1, 200, 40))
        assert abs(res.normalized[-1] - res.xi) < 1e-4

    def test_grid_validation(self):
        f = SnParams(0, 1, 0)
        with pytest.raises(PreconditionError):
            verify_ratio_limit(f, f, [1.0], c_grid=np.linspace(1, 50, 10))
        with pytest.raises(PreconditionError):
            verify_ratio_limit(f, f, [1.0], c_grid=[200.0, 100.0])
        with pytest.raises(PreconditionError):
            verify_ratio_limit(f, f, [0.0])

    def test_mgf_log_domain_far_tail(self):
        f0, f1 = SnParams(0, 1, 3), SnParams(0, 2, -1)
        res = verify_ratio_limit(f0, f1, [1.0], Transform.MGF, c_grid=np.geomspace(1, 1e4, 20))
        assert np.all(np.isfinite(res.trace.log_abs_ratio))


class TestConfusable:
    def test_weight(self):
        g0, cert = construct_confusable_mixture(SnParams(0, 1, 1), SnParams(2, 1, -1), 0.6, 0.2)
        assert g0.alpha == pytest.approx(0.5)
        assert cert.passed

    @pytest.mark.parametrize("a,b", [(0.4, 0.4), (0.2, 0.6), (1.0, 0.5), (0.5, 0.0)])
    def test_preconditions(self, a, b):
        with pytest.raises(PreconditionError):
            construct_confusable_mixture(SnParams(0, 1, 1), SnParams(2, 1, -1), a, b)

    @settings(max_examples=25, deadline=None)
    @given(st.integers(0, 100_000))
    def test_certificate_sn(self, seed):
        rng = np.random.default_rng(seed)
        b, a = np.sort(rng.uniform(0.01, 0.99, size=2))
        assume(a - b > 1e-6)
        g0, cert = construct_confusable_mixture(random_sn(rng), random_sn(rng), a, b)
        assert cert.grid.shape == (1001,)
        assert cert.passed

    @pytest.mark.parametrize("family", ["msn", "cfusn"])
    def test_certificate_multivariate(self, rng, family):
        gen = random_msn if family == "msn" else random_cfusn
        f1, h0 = gen(rng), gen(rng)
        g0, cert = construct_confusable_mixture(f1, h0, 0.9, 0.1)
        assert cert.passed
        assert g0.alpha == pytest.approx(0.8 / 0.9)
        assert np.all(np.asarray(mixture_pdf(g0, cert.grid)) > 0)


class TestSerialization:
    def test_report_roundtrip(self, tmp_path):
        rep = check_identifiable(_cfusn(np.eye(2), np.eye(2)), _cfusn(2 * np.eye(2), np.eye(2)))
        path = tmp_path / "r.json"
        dump_report(rep, path)
        back = load_report(path)
        assert back.verdict is rep.verdict and back.theorem is rep.theorem
        assert np.allclose(back.witness, rep.witness)
        assert back.gamma_diff_class == rep.gamma_diff_class
        assert back.to_dict() == rep.to_dict()

    def test_trace_roundtrip(self, tmp_path):
        res = verify_ratio_limit(SnParams(0, 1, 2), SnParams(0, 1, -1), [1.0])
        text = trace_to_csv(res.trace)
        assert text.splitlines()[0] == "c,log_abs_ratio,phase"
        path = tmp_path / "t.csv"
        dump_trace(res.trace, path)
        back = load_trace(path, Transform.CF, [1.0])
        assert isinstance(back, RatioTrace)
        assert np.array_equal(back.c_grid, res.trace.c_grid)
        assert np.array_equal(back.log_abs_ratio, res.trace.log_abs_ratio)
        assert np.array_equal(back.phase, res.trace.phase)

    def test_trace_validation(self):
        with pytest.raises(PreconditionError):
            RatioTrace(np.array([1.0, 1.0]), np.zeros(2), np.zeros(2), Transform.CF, np.array([1.0]))
        with pytest.raises(PreconditionError):
            RatioTrace(np.array([1.0, 2.0]), np.zeros(3), np.zeros(2), Transform.CF, np.array([1.0]))


def test_log_complex_roundtrip():
    from skewmix.identifiability import LogComplex

    z = 0.3 - 2.0j
    assert LogComplex.from_complex(z).to_complex() == pytest.approx(z)
    assert cmath.isclose((LogComplex.from_complex(z) / LogComplex.from_complex(z)).to_complex(), 1.0)
