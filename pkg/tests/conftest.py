from pathlib import Path

import pytest

from bdi_pentest import load_scenario, parse_program

REPO = Path(__file__).resolve().parent.parent
SCENARIOS = REPO / "scenarios"
DATA = Path(__file__).resolve().parent / "data"


@pytest.fixture(scope="session")
def single_target_scenario():
    return load_scenario((SCENARIOS / "single_target.yaml").read_text())


@pytest.fixture(scope="session")
def single_target_program():
    return parse_program((SCENARIOS / "single_target_agent.asl").read_text())


@pytest.fixture(scope="session")
def hardened_scenario():
    return load_scenario((SCENARIOS / "hardened.yaml").read_text())
