import pytest

from cagraph import CommunityLaw, DensityLaw, SizeLaw


@pytest.fixture
def law_x3_q05():
    return CommunityLaw.iid(SizeLaw.point(3), DensityLaw.point(0.5))


@pytest.fixture
def law_x2_q1():
    return CommunityLaw.iid(SizeLaw.point(2), DensityLaw.point(1.0))


@pytest.fixture
def law_mixed():
    return CommunityLaw.iid(
        SizeLaw.pmf({1: 0.2, 3: 0.5, 7: 0.3}), DensityLaw.uniform(0.1, 0.6)
    )
