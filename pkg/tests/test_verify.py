import pytest

from lomse import verify


@pytest.mark.parametrize("scope", verify.SCOPES)
def test_suites_pass(scope):
    checks = verify.run(scope)
    failed = [c for c in checks if not c.passed]
    assert checks and not failed, failed


def test_unknown_scope():
    with pytest.raises(ValueError):
        verify.run("topology")


def test_failure_is_reported_not_raised(monkeypatch):
    def boom():
        raise ArithmeticError("broken")
    monkeypatch.setitem(verify.SUITES, "algebra", boom)
    (check,) = verify.run("algebra")
    assert not check.passed
    assert "broken" in check.detail
