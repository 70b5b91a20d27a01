import pytest
from sklearn.base import clone

from zsembed import MaximinEquilibrium


def test_get_set_params_and_clone():
    est = MaximinEquilibrium(damping=0.7)
    params = est.get_params()
    assert params["damping"] == 0.7
    est.set_params(max_iter=50)
    copy = clone(est)
    assert copy.get_params()["max_iter"] == 50
    assert not hasattr(copy, "equilibrium_")


def test_fit_and_score(cournot_asym):
    est = MaximinEquilibrium().fit(cournot_asym)
    assert est.equilibrium_ == pytest.approx([10 / 3, 8 / 3, 2.0], abs=1e-6)
    assert est.subsidy_strategy_ == pytest.approx(4.0, abs=1e-8)
    assert est.n_iter_ > 0
    assert est.score(cournot_asym) >= -1e-9


def test_fit_rejects_arrays():
    with pytest.raises(TypeError):
        MaximinEquilibrium().fit([[1, 2]])


def test_unfitted_score(cournot_asym):
    from sklearn.exceptions import NotFittedError

    with pytest.raises(NotFittedError):
        MaximinEquilibrium().score(cournot_asym)
