import csv
import os
import sys
from datetime import datetime

import pandas as pd


class Logger:
    def __init__(self, log_dir='logs', enabled=True):
        self.log_dir = log_dir
        self.enabled = enabled
        self.trials_file = os.path.join(log_dir, 'verify_trials.csv')
        self.computations_file = os.path.join(log_dir, 'computations.csv')
        self.errors_file = os.path.join(log_dir, 'errors.log')

        if not self.enabled:
            return

        try:
            os.makedirs(log_dir, exist_ok=True)
        except OSError as e:
            print(f"CRITICAL: Cannot create log dir {log_dir}: {e}", file=sys.stderr)
            self.enabled = False
            return

        self._init_csv(self.trials_file, [
            'timestamp', 'seed', 'trial', 'utility', 'k',
            'identity', 'deviation', 'tolerance', 'status'
        ])

        self._init_csv(self.computations_file, [
            'timestamp', 'utility', 'quantity', 'k', 'value', 'lambda'
        ])

    def _init_csv(self, filepath, headers):
        if not os.path.exists(filepath):
            try:
                with open(filepath, 'w', newline='', encoding='utf-8') as f:
                    writer = csv.writer(f)
                    writer.writerow(headers)
            except IOError as e:
                print(f"Error initializing CSV {filepath}: {e}", file=sys.stderr)

    def _append_rows(self, filepath, rows, what):
        if not self.enabled:
            return
        try:
            with open(filepath, 'a', newline='', encoding='utf-8') as f:
                writer = csv.writer(f)
                writer.writerows(rows)
        except IOError as e:
            self.log_error(f"Failed to log {what}: {e}")

    def log_trials(self, records):
        stamp = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
        self._append_rows(self.trials_file, [[
            stamp,
            r.get('seed', ''),
            r.get('trial', ''),
            r.get('utility', ''),
            r.get('k', ''),
            r.get('identity', ''),
            repr(float(r.get('deviation', 0.0))),
            repr(float(r.get('tolerance', 0.0))),
            'PASS' if r.get('passed') else 'FAIL'
        ] for r in records], 'verification trials')

    def log_computation(self, utility, quantity, k, value, lam=None):
        stamp = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
        self._append_rows(self.computations_file, [[
            stamp, utility, quantity, k, str(value), '' if lam is None else repr(float(lam))
        ]], 'computation')

    def log_error(self, error_message, error_type='ERROR'):
        if not self.enabled:
            return
        try:
            with open(self.errors_file, 'a', encoding='utf-8') as f:
                timestamp = datetime.now().strftime('%Y-%m-%d %H:%M:%S')
                f.write(f"[{timestamp}] [{error_type}] {error_message}\n")
        except IOError as e:
            print(f"CRITICAL: Failed to write to error log: {e}", file=sys.stderr)

    def log_info(self, message):
        self.log_error(message, error_type='INFO')

    def _read_trials_df(self):
        try:
            return pd.read_csv(self.trials_file)
        except FileNotFoundError:
            return None
        except pd.errors.EmptyDataError:
            return None

    def get_failure_stats(self, seed=None):
        """Per-identity totals over the logged trials, optionally for one seed."""
        stats = {'total_checks': 0, 'failed_checks': 0, 'by_identity': {}}
        if not self.enabled:
            return stats
        try:
            df = self._read_trials_df()
            if df is None or df.empty:
                return stats
        except Exception as e:
            self.log_error(f"Failed to read trials file for stats: {e}")
            return stats

        if seed is not None:
            df = df[df['seed'] == seed]
        if df.empty:
            return stats

        stats['total_checks'] = len(df)
        stats['failed_checks'] = int((df['status'] == 'FAIL').sum())
        grouped = df.groupby('identity')
        for identity, group in grouped:
            stats['by_identity'][identity] = {
                'checks': len(group),
                'failed': int((group['status'] == 'FAIL').sum()),
                'max_deviation': float(group['deviation'].max())
            }
        return stats
