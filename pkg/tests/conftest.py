import sys

import pytest

from spectral_mu import make_disk, make_rectangle, make_two_disks


@pytest.fixture(scope="session")
def small_square():
    return make_rectangle(1.0, 1.0, 1.0 / 21, id="square20")


@pytest.fixture(scope="session")
def small_disk():
    return make_disk(1.0, 1.0 / 12, id="disk_small")


@pytest.fixture(scope="session")
def small_two_disks():
    return make_two_disks(1.0, 1.0, 1.0 / 10, id="two_small")


def pytest_terminal_summary(terminalreporter):
    for name, mod in list(sys.modules.items()):
        if name.endswith("test_acceptance") and getattr(mod, "RESULTS", None):
            terminalreporter.section("acceptance criteria")
            for line in mod.RESULTS:
                terminalreporter.write_line(line)
