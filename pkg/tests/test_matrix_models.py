"""Random-matrix models: samplers, diagonal discretizations, bimodule word
evaluation, commutation of left and right actions, and small Monte Carlo
convergence checks (heavier configurations live in the acceptance tests)."""

import math

import numpy as np
import pytest

from bipoisson.errors import CapExceededError, ShapeMismatchError
from bipoisson.matrix_models import (
    AtomLaw,
    EnsembleSpec,
    VariableSpec,
    build_diagonal_model,
    build_wishart_model,
    commutation_check,
    estimate_empirical_cumulants,
    evaluate_bimatrix_word,
    padded_diagonal,
    rate_split,
    sample_gue,
    sample_haar_unitary,
)
from bipoisson.partitions import LEFT, RIGHT

TWO_ATOM = AtomLaw((1.0, 2.0), (0.5, 0.5))


def two_sided_spec(rate, sizes=(16,), trials=8, seed=11, max_word=3, shared=True):
    return EnsembleSpec(
        rate=rate,
        variables=(
            VariableSpec("zl", LEFT, TWO_ATOM, 0),
            VariableSpec("zr", RIGHT, TWO_ATOM, 0 if shared else 1),
        ),
        sizes=sizes,
        trials=trials,
        seed=seed,
        max_word_len=max_word,
    )


class TestAtomLaw:
    def test_moments(self):
        assert TWO_ATOM.moment(1) == 1.5
        assert TWO_ATOM.moment(2) == 2.5
        assert AtomLaw.point_mass(3.0).moment(4) == 81.0

    def test_quantiles_hit_weights(self):
        q = TWO_ATOM.quantiles(10)
        assert sorted(q.tolist()) == [1.0] * 5 + [2.0] * 5

    def test_validation(self):
        with pytest.raises(ValueError):
            AtomLaw((1.0,), (0.5,))
        with pytest.raises(ShapeMismatchError):
            AtomLaw((1.0, 2.0), (1.0,))


class TestSamplers:
    def test_gue_statistics(self):
        rng = np.random.default_rng(0)
        n, reps = 64, 200
        diag_vals, off_re = [], []
        for _ in range(reps):
            x = sample_gue(n, rng)
            assert np.allclose(x, x.conj().T)
            diag_vals.extend(np.diagonal(x).real)
            off_re.extend(x[0, 1:].real)
        assert np.var(diag_vals) == pytest.approx(1.0 / n, rel=0.1)
        assert np.var(off_re) == pytest.approx(1.0 / (2 * n), rel=0.1)

    def test_haar_unitary(self):
        rng = np.random.default_rng(1)
        u = sample_haar_unitary(32, rng)
        assert np.allclose(u @ u.conj().T, np.eye(32), atol=1e-12)
        # mean of |u_11|^2 is 1/n
        vals = [abs(sample_haar_unitary(16, rng)[0, 0]) ** 2 for _ in range(400)]
        assert np.mean(vals) == pytest.approx(1 / 16, rel=0.25)


class TestDiagonalModel:
    def test_tensor_factorization(self):
        laws = [TWO_ATOM, AtomLaw((0.0, 3.0), (0.25, 0.75))]
        diags = build_diagonal_model(laws, 8)
        d1, d2 = diags
        # joint normalized-trace moments factor over independent marginals
        assert np.mean(d1 * d2) == pytest.approx(
            laws[0].moment(1) * laws[1].moment(1), abs=1e-12
        )
        assert np.mean(d1**2 * d2) == pytest.approx(
            laws[0].moment(2) * laws[1].moment(1), abs=1e-12
        )

    def test_budget(self):
        with pytest.raises(CapExceededError):
            build_diagonal_model([TWO_ATOM] * 4, 100, budget=10_000)

    def test_padded_diagonal(self):
        rng = np.random.default_rng(2)
        d = padded_diagonal(TWO_ATOM, 3, 8, rng)
        assert d.shape == (8,)
        assert np.all(d[3:] == 0)
        assert set(d[:3]) <= {1.0, 2.0}


class TestRateSplit:
    def test_fractional(self):
        assert rate_split(0.5, 100) == (0, 100, 50)

    def test_integer_folds_into_delta(self):
        k, p_unit, p_frac = rate_split(2.0, 100)
        assert (k, p_unit, p_frac) == (1, 100, 100)

    def test_mixed(self):
        assert rate_split(2.5, 100) == (2, 100, 50)


class TestWordEvaluation:
    def test_left_only_is_trace_of_product(self):
        rng = np.random.default_rng(3)
        a = rng.normal(size=(5, 5))
        b = rng.normal(size=(5, 5))
        got = evaluate_bimatrix_word([(a, LEFT), (b, LEFT)])
        assert got == pytest.approx(np.trace(a @ b) / 5)

    def test_right_actions_anti_compose(self):
        rng = np.random.default_rng(4)
        a = rng.normal(size=(5, 5))
        b = rng.normal(size=(5, 5))
        got = evaluate_bimatrix_word([(a, RIGHT), (b, RIGHT)])
        assert got == pytest.approx(np.trace(b @ a) / 5)

    def test_mixed_word(self):
        rng = np.random.default_rng(5)
        a = rng.normal(size=(4, 4))
        b = rng.normal(size=(4, 4))
        got = evaluate_bimatrix_word([(a, LEFT), (b, RIGHT)])
        assert got == pytest.approx(np.trace(a @ b) / 4)

    def test_empty_word_rejected(self):
        with pytest.raises(ShapeMismatchError):
            evaluate_bimatrix_word([])


class TestEnsembleSpec:
    def test_validation(self):
        with pytest.raises(ValueError):
            two_sided_spec(1.0, sizes=(32, 16))
        with pytest.raises(ShapeMismatchError):
            EnsembleSpec(
                1.0,
                (
                    VariableSpec("a", LEFT, TWO_ATOM, 0),
                    VariableSpec("b", RIGHT, AtomLaw.point_mass(1.0), 0),
                ),
                (8,),
                1,
                0,
                2,
            )

    def test_jump_moment_factors_over_slots(self):
        spec = two_sided_spec(1.0, shared=False)
        assert spec.jump_moment(("zl", "zr")) == pytest.approx(1.5 * 1.5)
        shared = two_sided_spec(1.0, shared=True)
        assert shared.jump_moment(("zl", "zr")) == pytest.approx(2.5)

    def test_targets(self):
        spec = two_sided_spec(0.5)
        t = spec.target_cumulants()
        assert t(("zl",)) == pytest.approx(0.5 * 1.5)
        assert t(("zl", "zr")) == pytest.approx(0.5 * 2.5)


class TestModelConvergence:
    def test_commutation_exact(self):
        spec = two_sided_spec(0.5)
        rng = np.random.default_rng(6)
        ens = build_wishart_model(spec, 24, rng)
        assert commutation_check(ens, rng) < 1e-10

    def test_first_cumulant_unbiased(self):
        # E tr((X D X)) = (p/n) E[atom]: exact at any size, so the rate-0.5
        # first cumulant estimate converges fast
        spec = two_sided_spec(0.5, sizes=(48,), trials=60, seed=9, max_word=1)
        rep = estimate_empirical_cumulants(spec)[0]
        est = rep.estimates[0]
        assert abs(est.empirical_cumulant - est.target_cumulant) < 4 * max(
            est.moment_std_err, 1e-3
        )

    @pytest.mark.parametrize("rate", [0.5, 2.5])
    def test_determinism(self, rate):
        spec = two_sided_spec(rate, sizes=(12,), trials=5, seed=21, max_word=2)
        r1 = estimate_empirical_cumulants(spec)
        r2 = estimate_empirical_cumulants(spec)
        for e1, e2 in zip(r1[0].estimates, r2[0].estimates):
            assert e1.empirical_moment == e2.empirical_moment
            assert e1.empirical_cumulant == e2.empirical_cumulant

    def test_imag_residue_small(self):
        spec = two_sided_spec(1.0, sizes=(16,), trials=5, seed=2, max_word=3)
        rep = estimate_empirical_cumulants(spec)[0]
        assert rep.max_imag_residue < 1e-9

    def test_rate_above_one_runs(self):
        spec = two_sided_spec(2.5, sizes=(12,), trials=4, seed=13, max_word=2)
        rep = estimate_empirical_cumulants(spec)[0]
        assert all(math.isfinite(e.empirical_cumulant) for e in rep.estimates)
