import pytest

from orbitbell import ScenarioConfig, build_scenario


@pytest.fixture(scope="session")
def s3_scenario():
    return build_scenario(ScenarioConfig.from_dict({"group": {"symmetric": 3}}))


@pytest.fixture(scope="session")
def s4_scenario():
    return build_scenario(ScenarioConfig.from_dict({"group": {"symmetric": 4}}))
