import pytest

from rclkit.fixture_gen import build_fix_a2, build_fix_prod, build_fix_stab3


@pytest.fixture(scope="session")
def ws_a2():
    return build_fix_a2()


@pytest.fixture(scope="session")
def ws_stab3():
    return build_fix_stab3()


@pytest.fixture(scope="session")
def ws_prod():
    return build_fix_prod()


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """Freshly regenerated fixture files (also used to cross-check the
    shipped ones)."""
    out = tmp_path_factory.mktemp("fixtures")
    from rclkit.fixture_gen import main
    assert main([str(out)]) == 0
    return out
