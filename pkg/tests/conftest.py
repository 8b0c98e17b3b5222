"""Shared fixtures; the expensive 13-dimensional objects are built once."""

import pytest

from qsteiner import fixtures
from qsteiner.groups import orbit_partition
from qsteiner.verify import expand_orbits, verify_design


@pytest.fixture(scope="session")
def paper_group():
    return fixtures.fixture_group()


@pytest.fixture(scope="session")
def t2_table(paper_group):
    return orbit_partition(paper_group, 2)


@pytest.fixture(scope="session")
def t3_table(paper_group):
    return orbit_partition(paper_group, 3)


@pytest.fixture(scope="session")
def paper_blocks(paper_group):
    blocks, lengths = expand_orbits(
        paper_group, fixtures.solution_representatives()
    )
    assert set(lengths) == {106483}
    return blocks


@pytest.fixture(scope="session")
def paper_report(paper_blocks):
    return verify_design(paper_blocks, 2, 1)
