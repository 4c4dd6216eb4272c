import json
import os
import sys
import threading
from copy import deepcopy
from datetime import datetime
from typing import Any, Dict, List, Optional

from core.solver import SolveConfig

# --- CONSTANTS ---
KEY_SOLVER = 'solver'
KEY_INPUT = 'input'
KEY_ENTROPY = 'entropy'
KEY_VERIFY = 'verify'
KEY_ORACLE = 'oracle'
KEY_OUTPUT = 'output'
KEY_LOGGING = 'logging'
KEY_META = '_meta'

CURRENT_CONFIG_VERSION = 1

IDENTITIES = (
    'primal_dual', 'rescale', 'fhs_relative', 'fhs_entropy',
    'arimoto', 'frittelli', 'closed_form', 'sharma_mittal',
)
OUTPUT_FORMATS = ('table', 'json', 'csv')


class SettingsManager:
    _lock = threading.RLock()

    def __init__(self, settings_path='config/settings.json'):
        self.settings_path = settings_path
        self._settings_cache: Dict[str, Any] = {}
        self._load_and_validate()

    def _get_defaults(self) -> Dict[str, Any]:
        """Centralized Default Schema Definition."""
        tolerances = {name: 1e-9 for name in IDENTITIES}
        tolerances['frittelli'] = 1e-8
        return {
            KEY_META: {'version': CURRENT_CONFIG_VERSION},
            KEY_SOLVER: {
                'rel_tol': 1e-12,
                'abs_tol': 1e-14,
                'max_iter': 200,
                'bracket_growth': 2.0
            },
            KEY_INPUT: {
                'normalization_tol': 1e-9,
                'renormalize': False
            },
            KEY_ENTROPY: {
                # primal/dual agreement, relative to 1 + |n_u|
                'self_check_tol': 1e-9,
                'arimoto_auto_normalize': False
            },
            KEY_VERIFY: {
                'tolerances': tolerances,
                'gammas': [-2.0, -1.0, -0.5, 0.25, 0.5, 0.75],
                'include_log': True,
                'max_k': 6,
                'singular_probability': 0.3
            },
            KEY_ORACLE: {
                'resolution': 10000,
                'max_k': 4
            },
            KEY_OUTPUT: {
                'format': 'table',
                'table_decimals': 6
            },
            KEY_LOGGING: {
                'enabled': True,
                'log_dir': 'logs'
            }
        }

    # --- MIGRATION & LOAD ---
    def _migrate_schema(self, data: Dict) -> Dict:
        meta = data.get(KEY_META, {})
        version = meta.get('version', 0)

        if version < CURRENT_CONFIG_VERSION:
            print(f"[Settings] Migrating config from v{version} to v{CURRENT_CONFIG_VERSION}...", file=sys.stderr)
            if KEY_META not in data:
                data[KEY_META] = {}
            data[KEY_META]['version'] = CURRENT_CONFIG_VERSION
            data[KEY_META]['last_migration'] = str(datetime.now())

        return data

    def _load_and_validate(self):
        with self._lock:
            loaded = {}
            try:
                if os.path.exists(self.settings_path) and os.path.getsize(self.settings_path) > 0:
                    with open(self.settings_path, 'r') as f:
                        loaded = json.load(f)
                else:
                    loaded = self._get_defaults()
            except json.JSONDecodeError:
                print("[Settings] ❌ CORRUPTED JSON! Falling back to defaults.", file=sys.stderr)
                loaded = self._get_defaults()
            except OSError as e:
                print(f"[Settings] ❌ Cannot read {self.settings_path}: {e}. Using defaults.", file=sys.stderr)
                loaded = self._get_defaults()

            loaded = self._migrate_schema(loaded)
            self._settings_cache = self._validate_schema(loaded)

    def _validate_schema(self, config: Dict) -> Dict:
        defaults = self._get_defaults()
        for key, val in defaults.items():
            if key not in config or not isinstance(config[key], dict):
                config[key] = val
            else:
                for sub_key, sub_val in val.items():
                    if sub_key not in config[key]:
                        config[key][sub_key] = sub_val
                    elif isinstance(sub_val, dict) and isinstance(config[key][sub_key], dict):
                        for leaf, leaf_val in sub_val.items():
                            config[key][sub_key].setdefault(leaf, leaf_val)

        for section in (KEY_SOLVER, KEY_INPUT, KEY_ENTROPY, KEY_ORACLE, KEY_OUTPUT):
            for sub_key, value in list(config[section].items()):
                if not self._validate_input(sub_key, value):
                    print(f"[Settings] ❌ Invalid Input: {section}.{sub_key}={value}, using default", file=sys.stderr)
                    config[section][sub_key] = defaults[section].get(sub_key, value)
        return config

    def load_settings(self) -> Dict[str, Any]:
        return deepcopy(self._settings_cache)

    def _deep_update(self, base_dict: Dict, update_dict: Dict) -> Dict:
        for key, value in update_dict.items():
            if isinstance(value, dict) and key in base_dict and isinstance(base_dict[key], dict):
                self._deep_update(base_dict[key], value)
            else:
                base_dict[key] = value
        return base_dict

    def apply_overrides(self, overrides: Dict[str, Any]) -> Dict[str, Any]:
        """In-memory deep merge; the file on disk is left alone."""
        with self._lock:
            merged = self._deep_update(deepcopy(self._settings_cache), overrides)
            self._settings_cache = self._validate_schema(merged)
            return self.load_settings()

    # --- VALIDATION ---

    def _validate_input(self, key: str, value: Any) -> bool:
        try:
            if key in ('rel_tol', 'abs_tol', 'normalization_tol', 'self_check_tol'):
                return 0.0 < float(value) < 1.0
            elif key == 'max_iter':
                return 8 <= int(value) <= 100000
            elif key == 'bracket_growth':
                return float(value) > 1.0
            elif key == 'resolution':
                return int(value) >= 100
            elif key == 'max_k':
                return 1 <= int(value) <= 64
            elif key == 'format':
                return str(value).lower() in OUTPUT_FORMATS
            elif key == 'table_decimals':
                return 0 <= int(value) <= 17
            elif key == 'singular_probability':
                return 0.0 <= float(value) < 1.0
            elif key == 'tolerance':
                return float(value) >= 0.0
            return True
        except (TypeError, ValueError):
            return False

    # --- GETTERS ---
    def _get(self, section: str, key: str, default=None):
        return self._settings_cache.get(section, {}).get(key, default)

    def get_solve_config(self) -> SolveConfig:
        return SolveConfig.from_settings(self._settings_cache)

    def get_normalization_tol(self) -> float:
        return float(self._get(KEY_INPUT, 'normalization_tol', 1e-9))

    def get_renormalize(self) -> bool:
        return bool(self._get(KEY_INPUT, 'renormalize', False))

    def get_arimoto_auto_normalize(self) -> bool:
        return bool(self._get(KEY_ENTROPY, 'arimoto_auto_normalize', False))

    def get_verify_tolerances(self) -> Dict[str, float]:
        tolerances = self._get(KEY_VERIFY, 'tolerances', {})
        return {name: float(tolerances.get(name, 1e-9)) for name in IDENTITIES}

    def get_verify_gammas(self) -> List[float]:
        return [float(g) for g in self._get(KEY_VERIFY, 'gammas', [])]

    def get_include_log(self) -> bool:
        return bool(self._get(KEY_VERIFY, 'include_log', True))

    def get_verify_max_k(self) -> int:
        return int(self._get(KEY_VERIFY, 'max_k', 6))

    def get_singular_probability(self) -> float:
        return float(self._get(KEY_VERIFY, 'singular_probability', 0.3))

    def get_oracle_resolution(self) -> int:
        return int(self._get(KEY_ORACLE, 'resolution', 10000))

    def get_oracle_max_k(self) -> int:
        return int(self._get(KEY_ORACLE, 'max_k', 4))

    def get_output_format(self) -> str:
        return str(self._get(KEY_OUTPUT, 'format', 'table'))

    def get_table_decimals(self) -> int:
        return int(self._get(KEY_OUTPUT, 'table_decimals', 6))

    def get_logging_enabled(self) -> bool:
        return bool(self._get(KEY_LOGGING, 'enabled', True))

    def get_log_dir(self) -> str:
        return str(self._get(KEY_LOGGING, 'log_dir', 'logs'))

    def get_summary(self, override_tol: Optional[float] = None) -> str:
        lines = []
        lines.append("=" * 60)
        lines.append("CURRENT CONFIGURATION".center(60))
        lines.append("=" * 60)
        cfg = self.get_solve_config()
        lines.append(f"Solver      : rel_tol={cfg.rel_tol:g} max_iter={cfg.max_iter} growth={cfg.bracket_growth:g}")
        lines.append(f"Input       : tol={self.get_normalization_tol():g} renormalize={self.get_renormalize()}")
        gammas = ", ".join(f"{g:g}" for g in self.get_verify_gammas())
        lines.append(f"Verify      : gammas=[{gammas}] log={self.get_include_log()} max_k={self.get_verify_max_k()}")
        for name, tol in self.get_verify_tolerances().items():
            shown = tol if override_tol is None else override_tol
            lines.append(f"  {name:<14}: {shown:g}")
        lines.append(f"Oracle      : resolution={self.get_oracle_resolution()} max_k={self.get_oracle_max_k()}")
        lines.append(f"Logging     : enabled={self.get_logging_enabled()} dir={self.get_log_dir()}")
        lines.append("=" * 60)
        return "\n".join(lines)
