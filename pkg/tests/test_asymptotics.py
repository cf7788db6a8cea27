import itertools
import math

import numpy as np
import pytest

from tailratio import distributions as d
from tailratio.asymptotics import (
    delta_method_variance,
    design_quantiles,
    limit_center,
    pareto_limit_variances,
    smirnoff_cov,
    theorem1_variance,
)
from tailratio.errors import DomainError

MODELS = [d.pareto(1.0), d.pareto(0.4, 3.0), d.frechet(1.0), d.frechet(2.5),
          d.loglogistic(1.0), d.exponential(2.0), d.beta(2.0, 5.0)]


def test_smirnoff_example():
    cov = smirnoff_cov(d.pareto(1.0, 1.0), 2)
    # f(1.5) = 1/1.5^2 = 4/9, D11 = (2/9) / (4/9)^2
    assert cov.matrix[0, 0] == pytest.approx(1.125, rel=1e-14)
    assert cov.correlation == pytest.approx(0.5, abs=1e-12)
    assert (cov.p1, cov.p2) == pytest.approx((1 / 3, 2 / 3))


@pytest.mark.parametrize("model", MODELS, ids=str)
@pytest.mark.parametrize("s", [2, 3, 4, 5])
def test_smirnoff_structure(model, s):
    m = smirnoff_cov(model, s).matrix
    assert m[0, 1] == m[1, 0]
    assert m[0, 1] ** 2 <= m[0, 0] * m[1, 1]
    assert np.all(np.linalg.eigvalsh(m) >= -1e-12 * np.abs(m).max())
    assert smirnoff_cov(model, s).correlation == pytest.approx(1 / s, abs=1e-12)


def test_smirnoff_matches_generic_formula():
    # entries p_i (1 - p_j) / (f_i f_j), i <= j
    model = d.frechet(1.7)
    s = 4
    x, y = design_quantiles(model, s)
    f1, f2 = model.density(x), model.density(y)
    p1, p2 = 1 / (s + 1), s / (s + 1)
    ref = np.array([[p1 * (1 - p1) / f1**2, p1 * (1 - p2) / (f1 * f2)],
                    [p1 * (1 - p2) / (f1 * f2), p2 * (1 - p2) / f2**2]])
    np.testing.assert_allclose(smirnoff_cov(model, s).matrix, ref, rtol=1e-13)


def test_general_variance_examples():
    assert theorem1_variance(d.pareto(1.0), 2).v == pytest.approx(1.5, rel=1e-12)
    assert theorem1_variance(d.pareto(2.0), 3).v == pytest.approx(2 / 3, rel=1e-12)
    fr = theorem1_variance(d.frechet(1.0), 2)
    assert fr.a == pytest.approx(math.log(3) / 3, rel=1e-14)
    assert fr.b == pytest.approx(2 / 3 * math.log(1.5), rel=1e-14)
    assert fr.v == pytest.approx(2.4534711274, rel=1e-9)


@pytest.mark.parametrize(
    "s, alpha, delta",
    list(itertools.product((2, 3, 4, 5), (0.3, 0.5, 1.0, 1.5), (0.1, 1.0, 7.0))),
)
def test_pareto_paths_agree(s, alpha, delta):
    av = theorem1_variance(d.pareto(alpha, delta), s)
    assert av.v == pytest.approx(pareto_limit_variances(s, alpha)[0], rel=1e-12, abs=1e-12)
    assert av.a == pytest.approx(alpha * s / (s + 1), abs=1e-12)
    assert av.b == pytest.approx(alpha / (s + 1), abs=1e-12)
    assert av.center == pytest.approx(math.log(s) / alpha, rel=1e-12)


@pytest.mark.parametrize("model", MODELS, ids=str)
@pytest.mark.parametrize("s", [2, 3, 5])
def test_delta_method_identity(model, s):
    v1 = theorem1_variance(model, s).v
    assert delta_method_variance(model, s) == pytest.approx(v1, rel=1e-12)


def test_pareto_limit_variances():
    v = pareto_limit_variances(2, 1.0)
    assert v == pytest.approx((1.5, 1.5, 1.5 / math.log(2) ** 2))
    assert v[2] == pytest.approx(3.1220, abs=1e-4)
    assert pareto_limit_variances(3, 1.0)[0] == pytest.approx(8 / 3)
    a = pareto_limit_variances(4, 0.7)
    b = pareto_limit_variances(4, 1.4)
    assert b[0] == pytest.approx(a[0] / 4)
    assert b[1] == a[1]
    with pytest.raises(DomainError):
        pareto_limit_variances(1, 1.0)
    with pytest.raises(DomainError):
        pareto_limit_variances(2, -1.0)


def test_limit_center():
    assert limit_center(d.pareto(2.0, 5.0), 3) == pytest.approx(math.log(3) / 2)
    x, y = design_quantiles(d.frechet(1.0), 2)
    assert limit_center(d.frechet(1.0), 2) == pytest.approx(math.log(y / x))
