import pytest

import _acceptance_log
from hrc_hazard.hazard import resolve_hazard_config
from hrc_hazard.kinematics import bundled_robot_path, load_robot_model


@pytest.fixture(scope="session")
def model():
    """The bundled six-joint arm model used throughout the suite."""
    return load_robot_model(bundled_robot_path())


@pytest.fixture(scope="session")
def cfg(model):
    """Hazard config resolved from built-in defaults against `model`."""
    return resolve_hazard_config({}, model)


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    # Keep a config file set in the caller's environment from leaking in.
    monkeypatch.delenv("HRC_HAZARD_CONFIG", raising=False)


def pytest_terminal_summary(terminalreporter):
    if _acceptance_log.LINES:
        terminalreporter.write_sep("-", "acceptance checks")
        for line in _acceptance_log.LINES:
            terminalreporter.write_line(line)
