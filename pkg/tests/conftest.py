import pytest

import helpers


@pytest.fixture
def fig1_netlist():
    return helpers.fig1_netlist()
