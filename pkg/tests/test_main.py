import json

import pytest

import main


def run(settings_path, capsys, *argv):
    code = main.main(['--config', str(settings_path), *argv])
    out, err = capsys.readouterr()
    return code, out, err


def rows(table):
    return [line.split() for line in table.strip().splitlines()[1:]]


class TestCompute:
    def test_uniform_shannon(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--u', 'log', '--q', 'h')
        assert code == 0
        assert rows(out)[0][:3] == ['log', 'h', '0.693147']

    def test_renyi_fixture(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.8,0.2', '--u', 'iso:0.5', '--q', 'h')
        assert code == 0
        assert rows(out)[0][:4] == ['iso:0.5', 'h', '0.385662', '0.824621']

    def test_singular_is_inf(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--pq', '1,0', '--u', 'log', '--q', 'H')
        assert code == 0
        assert rows(out)[0][:3] == ['log', 'H', 'inf']

    def test_table_order_and_defaults(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.3,0.7', '--pq', '0.5,0.5',
                           '--u', 'log', '--u', 'iso:-1', '--q', 'h', '--q', 'N', '--q', 'renyi')
        assert code == 0
        keys = [(r[0], r[1]) for r in rows(out)]
        assert keys == [('log', 'h'), ('log', 'N'), ('log', 'renyi'),
                        ('iso:-1', 'h'), ('iso:-1', 'N'), ('iso:-1', 'renyi')]
        assert out.splitlines()[0].split() == ['utility', 'quantity', 'value', 'lambda']

    def test_allocation_column(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--alloc')
        assert code == 0
        assert rows(out)[0][-1] == '0.500000;0.500000'

    def test_csv_format(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--format', 'csv')
        assert code == 0
        header, line = out.strip().splitlines()
        assert header == 'utility,quantity,value,lambda'
        assert line.startswith('log,h,0.69314718')

    def test_json_reingestion(self, settings_path, capsys, tmp_path):
        args = ('--u', 'log', '--u', 'iso:-2', '--q', 'h', '--q', 'H', '--q', 'frittelli', '--format', 'json')
        code, first, _ = run(settings_path, capsys, 'compute', '--p', '0.2,0.3,0.5', '--pq', '0.1,0.6,0.3', *args)
        assert code == 0
        data = json.loads(first)
        path = tmp_path / 'again.json'
        path.write_text(first)
        code, second, _ = run(settings_path, capsys, 'compute', '--input', str(path), *args)
        assert code == 0
        assert json.loads(second)['rows'] == data['rows']
        assert second == first

    def test_json_infinity(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--pq', '1,0',
                           '--q', 'H', '--format', 'json')
        assert code == 0
        assert json.loads(out)['rows'][0]['value'] == 'inf'

    def test_deterministic(self, settings_path, capsys):
        argv = ('compute', '--p', '0.1,0.2,0.7', '--u', 'iso:0.25', '--q', 'h', '--q', 'fhs_H', '--q', 'arimoto')
        _, a, _ = run(settings_path, capsys, *argv)
        _, b, _ = run(settings_path, capsys, *argv)
        assert a == b

    def test_parse_error_exit_2(self, settings_path, capsys):
        code, _, err = run(settings_path, capsys, 'compute', '--p', '0.5,abc')
        assert code == 2
        assert 'line 1, column 5' in err

    def test_relative_quantity_needs_q(self, settings_path, capsys):
        code, _, err = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--q', 'H')
        assert code == 2
        assert 'reference vector' in err

    def test_bad_descriptor_exit_2(self, settings_path, capsys):
        code, _, _ = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--u', 'cara:2')
        assert code == 2

    def test_domain_error_exit_3(self, settings_path, capsys):
        code, _, err = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--pq', '1,0', '--q', 'fhs_D')
        assert code == 3
        assert 'NotAbsolutelyContinuous' in err

    def test_unnormalized_input(self, settings_path, capsys):
        code, _, _ = run(settings_path, capsys, 'compute', '--p', '1,3')
        assert code == 3
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '1,3', '--renormalize')
        assert code == 0

    def test_log_sharma_mittal_is_kl(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'compute', '--p', '0.5,0.5', '--pq', '0.4,0.6',
                           '--u', 'log', '--q', 'sharma_mittal')
        assert code == 0
        assert rows(out)[0][2] == '0.020411'

    def test_logs_computations(self, settings_path, sm, capsys):
        run(settings_path, capsys, 'compute', '--p', '0.5,0.5')
        with open(f"{sm.get_log_dir()}/computations.csv") as f:
            assert 'log,h,2,' in f.read()

    def test_missing_command(self, settings_path, capsys):
        assert main.main(['--config', str(settings_path)]) == 2

    def test_badly_encoded_file_exit_2(self, settings_path, capsys, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_bytes(b"0.5,0.5\xff\xfe\n")
        code, _, err = run(settings_path, capsys, 'compute', '--input', str(path))
        assert code == 2
        assert 'line 1, column 8' in err

    def test_json_nan_exit_2(self, settings_path, capsys, tmp_path):
        path = tmp_path / "nan.json"
        path.write_text('{"p": [NaN, 1.0]}')
        code, _, err = run(settings_path, capsys, 'compute', '--input', str(path))
        assert code == 2
        assert 'non-finite' in err


class TestVerify:
    def test_passes(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'verify', '--seed', '42', '--trials', '100')
        assert code == 0
        assert 'ALL IDENTITIES HOLD' in out

    def test_zero_tolerance_fails(self, settings_path, sm, capsys):
        code, out, err = run(settings_path, capsys, 'verify', '--seed', '42', '--trials', '1', '--tol', '0')
        assert code == 1
        assert 'COUNTEREXAMPLES' in out
        assert '   p = [' in out
        assert 'identity checks failed' in err

    def test_env_tolerance(self, settings_path, capsys, monkeypatch):
        monkeypatch.setenv('UENTROPY_TOL', '0')
        code, _, _ = run(settings_path, capsys, 'verify', '--trials', '1')
        assert code == 1
        code, _, _ = run(settings_path, capsys, 'verify', '--trials', '1', '--tol', '1e-6')
        assert code == 0

    def test_bad_env_tolerance(self, settings_path, capsys, monkeypatch):
        monkeypatch.setenv('UENTROPY_TOL', 'tight')
        code, _, _ = run(settings_path, capsys, 'verify', '--trials', '1')
        assert code == 2

    def test_zero_trials(self, settings_path, capsys):
        code, _, _ = run(settings_path, capsys, 'verify', '--trials', '0')
        assert code == 2

    def test_same_seed_same_report(self, settings_path, capsys):
        _, a, _ = run(settings_path, capsys, 'verify', '--seed', '7', '--trials', '3')
        _, b, _ = run(settings_path, capsys, 'verify', '--seed', '7', '--trials', '3')
        assert a == b

    def test_show_config(self, settings_path, capsys):
        code, _, err = run(settings_path, capsys, 'verify', '--trials', '1', '--tol', '1e-6', '--show-config')
        assert code == 0
        assert 'CURRENT CONFIGURATION' in err
        assert 'primal_dual   : 1e-06' in err


class TestOracle:
    def test_uniform_log(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'oracle', '--p', '0.5,0.5', '--u', 'log')
        assert code == 0
        fields = dict(line.split(None, 1) for line in out.strip().splitlines())
        assert fields['status'] == 'PASS'
        assert -1e-9 <= float(fields['gap']) <= 5e-4

    def test_point_mass(self, settings_path, capsys):
        code, out, _ = run(settings_path, capsys, 'oracle', '--p', '1,0', '--u', 'iso:-1', '--resolution', '500')
        assert code == 0
        fields = dict(line.split(None, 1) for line in out.strip().splitlines())
        assert float(fields['n_u_dual']) == pytest.approx(0.0, abs=1e-12)
        assert float(fields['brute_force']) == pytest.approx(0.0, abs=1e-2)

    def test_too_many_atoms(self, settings_path, capsys):
        code, _, err = run(settings_path, capsys, 'oracle', '--p', '0.2,0.2,0.2,0.2,0.2')
        assert code == 3
        assert 'TooLarge' in err
