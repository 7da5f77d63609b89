from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from extcat import finstruct, pseudotop, topgroup  # noqa: E402
from extcat.kernel import check_all  # noqa: E402

DATA = Path(__file__).parent / "data"
ALL_GROUPS = ("Z1", "Z2", "Z3", "Z4", "Z2xZ2", "S3")


@pytest.fixture(scope="session")
def topgroup_universe():
    ec = topgroup.build_universe([finstruct.preset_group(n) for n in ALL_GROUPS])
    return ec, check_all(ec)


@pytest.fixture(scope="session")
def pseudotop_two_point():
    spaces = [finstruct.FiniteSet.of_size(2, "X"), finstruct.FiniteSet.of_size(2, "Y")]
    ec = pseudotop.build_universe(spaces, "exhaustive")
    return ec, check_all(ec)


@pytest.fixture(scope="session")
def pseudotop_three_point():
    ec = pseudotop.build_universe([finstruct.FiniteSet.of_size(3, "X")], "maximal-plus")
    return ec, check_all(ec)
