from .settings_manager import SettingsManager
from .logger import Logger

__all__ = ['SettingsManager', 'Logger']
