import pytest

import sosm


@pytest.fixture(scope="session")
def efs():
    return sosm.load_efs()


@pytest.fixture(scope="session")
def efs_matrix(efs):
    return sosm.build_matrix(efs)
