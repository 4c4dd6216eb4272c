import json

import numpy as np
import pytest

from core.utility import isoelastic, logarithmic
from utils.logger import Logger
from utils.settings_manager import SettingsManager


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def settings_path(tmp_path):
    """Settings file whose log directory lives under tmp_path."""
    path = tmp_path / "settings.json"
    data = SettingsManager(str(tmp_path / "missing.json")).load_settings()
    data['logging']['log_dir'] = str(tmp_path / "logs")
    path.write_text(json.dumps(data, indent=2))
    return path


@pytest.fixture
def sm(settings_path):
    return SettingsManager(str(settings_path))


@pytest.fixture
def logger(sm):
    return Logger(sm.get_log_dir(), enabled=True)


@pytest.fixture(params=['log', -2.0, -1.0, -0.5, 0.25, 0.5, 0.75],
                ids=lambda g: 'log' if g == 'log' else f'iso{g}')
def builtin(request):
    return logarithmic() if request.param == 'log' else isoelastic(request.param)
