"""命令行测试"""
import json
from unittest.mock import patch

import pytest

from app.config import Config
from app.main import main
from app.models import CellCheck, Plant, ParameterRow, VerifyOutcome
from app.services.verification import VerificationService

PLANT_ARGS = ['--kp', '1', '--t1', '1', '--t2', '0.5']


def run_json(capsys, argv):
    code = main(argv + ['--format', 'json'])
    return code, json.loads(capsys.readouterr().out)


class TestTuneAndAnalyze:
    """tune / analyze"""

    def test_tune_text(self, capsys):
        assert main(['tune'] + PLANT_ARGS) == 0
        out = capsys.readouterr().out
        assert 'K    = 0.5' in out
        assert 'zeta = 1' in out

    def test_tune_json(self, capsys):
        code, doc = run_json(capsys, ['tune'] + PLANT_ARGS)
        assert code == 0
        assert doc['k'] == pytest.approx(0.5)
        assert doc['ti'] == 1.0
        assert doc['zeta'] == pytest.approx(1.0)

    def test_invalid_parameter_exit_code(self, capsys):
        assert main(['tune', '--kp', '1', '--t1', '1', '--t2', '-1']) == 2
        assert 't2' in capsys.readouterr().err

    def test_missing_argument(self):
        with pytest.raises(SystemExit) as exc:
            main(['tune', '--kp', '1'])
        assert exc.value.code == 2

    def test_no_command(self):
        assert main([]) == 2

    def test_analyze_tuned(self, capsys):
        code, doc = run_json(capsys, ['analyze'] + PLANT_ARGS)
        assert code == 0
        assert doc['cancellation_detected'] is True
        assert doc['ms'] == pytest.approx(1.1547, abs=1e-4)
        assert doc['mt'] == pytest.approx(1.0, abs=1e-6)
        assert doc['pm_deg'] == pytest.approx(76.3447, abs=1e-3)
        assert doc['wgc'] == pytest.approx(0.485868, rel=1e-5)
        assert all(p['re'] == pytest.approx(-1.0, abs=1e-4) for p in doc['poles'])

    def test_analyze_without_cancellation(self, capsys):
        code, doc = run_json(capsys, ['analyze'] + PLANT_ARGS + ['--k', '1', '--ti', '2'])
        assert code == 0
        assert doc['cancellation_detected'] is False
        assert doc['zeta'] is None

    def test_analyze_underdamped_note(self, capsys):
        """Ti = T1 但增益加倍：对消成立，阻尼比小于 1"""
        assert main(['analyze'] + PLANT_ARGS + ['--k', '1', '--ti', '1']) == 0
        out = capsys.readouterr().out
        assert '零极点对消: YES' in out
        assert '欠阻尼' in out

    def test_analyze_low_gain_crossover(self, capsys):
        """穿越频率远低于默认频段时仍能给出相位裕度"""
        code, doc = run_json(capsys, ['analyze'] + PLANT_ARGS + ['--k', '0.0001', '--ti', '1'])
        assert code == 0
        assert doc['wgc'] == pytest.approx(1e-4, rel=1e-3)
        assert doc['stable'] is True

    def test_analyze_unstable_loop_flagged(self, capsys):
        """失调后闭环不稳定：正常退出但明确标注"""
        code, doc = run_json(capsys, ['analyze'] + PLANT_ARGS + ['--k', '100', '--ti', '0.01'])
        assert code == 0
        assert doc['stable'] is False
        assert any(p['re'] > 0.0 for p in doc['poles'])
        assert main(['analyze'] + PLANT_ARGS + ['--k', '100', '--ti', '0.01']) == 0
        assert '闭环不稳定' in capsys.readouterr().out

    def test_analyze_tuned_has_no_instability_note(self, capsys):
        assert main(['analyze'] + PLANT_ARGS) == 0
        assert '闭环不稳定' not in capsys.readouterr().out


class TestSimulate:
    """simulate"""

    def test_simulate_json(self, capsys):
        code, doc = run_json(capsys, ['simulate'] + PLANT_ARGS)
        assert code == 0
        assert doc['ts'] == pytest.approx(5.835, abs=0.010)
        assert doc['po'] <= 1e-6
        assert doc['monotonic'] is True

    def test_simulate_text(self, capsys):
        assert main(['simulate', '--kp', '1', '--t1', '1', '--t2', '0.1']) == 0
        out = capsys.readouterr().out
        assert 'Monotonic = YES' in out
        assert 'Ts        = 1.170' in out

    def test_simulate_writes_csv(self, capsys, tmp_path):
        out = tmp_path / 'step.csv'
        assert main(['simulate'] + PLANT_ARGS + ['--dt', '0.01', '--out', str(out)]) == 0
        lines = out.read_text(encoding='utf-8').splitlines()
        assert lines[0] == 't,y,y_analytic'
        assert len(lines) == 1 + 3001

    def test_short_horizon_not_settled(self, capsys):
        assert main(['simulate'] + PLANT_ARGS + ['--horizon', '0.5']) == 3
        assert '错误' in capsys.readouterr().err

    def test_invalid_dt(self, capsys):
        assert main(['simulate'] + PLANT_ARGS + ['--dt', '0']) == 2


class TestVerify:
    """verify"""

    def test_verify_passes(self, capsys):
        code, doc = run_json(capsys, ['verify'])
        assert code == 0
        assert doc['all_pass'] is True
        assert len(doc['parameters']) == 6
        assert len(doc['performance']) == 6
        assert doc['performance'][0]['pm_deg'] == pytest.approx(76.35, abs=0.01)

    def test_verify_text_table(self, capsys):
        assert main(['verify']) == 0
        out = capsys.readouterr().out
        assert 'Ms=1.155 [PASS]' in out
        assert '全部单元格通过' in out

    def test_verify_failure_exit_code(self, capsys):
        """存在失败单元格时退出码为 1"""
        failed = VerifyOutcome(
            parameter_rows=[ParameterRow(
                plant_id=1,
                plant=Plant(kp=1.0, t1=1.0, t2=0.5),
                k=0.6,
                ti=1.0,
                poles=[-1.0, -1.0, -1.0],
                cells=[CellCheck(name='K', actual=0.6, expected=0.5, tolerance=1e-12, passed=False)],
            )],
            performance_rows=[],
            dt=0.005,
            band=0.02,
        )
        with patch.object(VerificationService, 'verify', return_value=failed):
            assert main(['verify']) == 1
        out = capsys.readouterr().out
        assert 'K=0.60 [FAIL]' in out
        assert '存在失败单元格' in out


class TestExportAndSweep:
    """export / sweep"""

    def test_export_nyquist_stdout(self, capsys):
        assert main(['export', 'nyquist'] + PLANT_ARGS + ['--points', '50']) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == 'omega,re,im'
        assert len(lines) == 51
        assert float(lines[1].split(',')[0]) == pytest.approx(0.02)
        assert float(lines[-1].split(',')[0]) == pytest.approx(200.0)

    def test_export_bode_file(self, tmp_path):
        out = tmp_path / 'bode.csv'
        assert main(['export', 'bode'] + PLANT_ARGS + ['--wmin', '0.1', '--wmax', '10', '--out', str(out)]) == 0
        lines = out.read_text(encoding='utf-8').splitlines()
        assert lines[0] == 'omega,mag_L,phase_L_deg,mag_S,mag_T'
        assert len(lines) == 501

    def test_export_step(self, capsys):
        assert main(['export', 'step'] + PLANT_ARGS + ['--dt', '0.1', '--horizon', '5']) == 0
        assert len(capsys.readouterr().out.splitlines()) == 52

    def test_export_step_matches_analytic(self, capsys):
        """t = 1 处 y = 1 - 2/e"""
        assert main(['export', 'step'] + PLANT_ARGS) == 0
        rows = [line.split(',') for line in capsys.readouterr().out.splitlines()[1:]]
        t, y, _ = next(r for r in rows if abs(float(r[0]) - 1.0) < 1e-9)
        assert float(y) == pytest.approx(0.264241, abs=1e-5)

    def test_export_step_detuned_leaves_analytic_empty(self, capsys):
        """非整定控制器没有解析响应"""
        assert main(['export', 'step'] + PLANT_ARGS + ['--k', '1', '--ti', '2', '--dt', '0.1', '--horizon', '5']) == 0
        rows = [line.split(',') for line in capsys.readouterr().out.splitlines()[1:]]
        assert len(rows) == 51
        assert all(r[2] == '' for r in rows)
        assert float(rows[-1][1]) > 0.0

    def test_export_bode_mag_t_bounded(self, capsys):
        """整定后 |T| 不超过 1"""
        assert main(['export', 'bode'] + PLANT_ARGS) == 0
        rows = capsys.readouterr().out.splitlines()[1:]
        assert max(float(line.split(',')[4]) for line in rows) <= 1.0 + 1e-9

    def test_export_nyquist_dc_limit(self, capsys):
        assert main(['export', 'nyquist'] + PLANT_ARGS) == 0
        first = capsys.readouterr().out.splitlines()[1].split(',')
        assert float(first[1]) == pytest.approx(1.0, abs=5e-3)
        assert float(first[2]) == pytest.approx(0.0, abs=5e-2)

    def test_export_invalid_range(self, capsys):
        assert main(['export', 'bode'] + PLANT_ARGS + ['--wmin', '10', '--wmax', '1']) == 2

    def test_export_io_error(self, capsys, tmp_path):
        out = tmp_path / 'missing' / 'bode.csv'
        assert main(['export', 'bode'] + PLANT_ARGS + ['--out', str(out)]) == 4

    def test_sweep(self, capsys):
        code, doc = run_json(capsys, ['sweep'] + PLANT_ARGS + ['--factors', '0.8,1,1.2'])
        assert code == 0
        monotonic = [row['monotonic'] for row in doc['rows']]
        assert monotonic == [True, True, False]

    def test_sweep_invalid_factors(self, capsys):
        assert main(['sweep'] + PLANT_ARGS + ['--factors', '1,-2']) == 2
        assert main(['sweep'] + PLANT_ARGS + ['--factors', 'a,b']) == 2


class TestConfig:
    """配置文件"""

    def test_defaults_without_file(self, tmp_path):
        cfg = Config(str(tmp_path / 'absent.ini'))
        assert cfg.get_dt() == 0.005
        assert cfg.get_band() == 0.02
        assert cfg.get_output_format() == 'text'

    def test_values_from_file(self, tmp_path):
        path = tmp_path / 'custom.ini'
        path.write_text('[simulation]\ndt = 0.01\n\n[output]\nformat = json\n', encoding='utf-8')
        cfg = Config(str(path))
        assert cfg.get_dt() == 0.01
        assert cfg.get_output_format() == 'json'

    def test_config_flag_sets_default_format(self, capsys, tmp_path):
        path = tmp_path / 'custom.ini'
        path.write_text('[output]\nformat = json\n', encoding='utf-8')
        assert main(['--config', str(path), 'tune'] + PLANT_ARGS) == 0
        assert json.loads(capsys.readouterr().out)['k'] == pytest.approx(0.5)

    def test_bad_format_in_config(self, capsys, tmp_path):
        path = tmp_path / 'custom.ini'
        path.write_text('[output]\nformat = xml\n', encoding='utf-8')
        assert main(['--config', str(path), 'tune'] + PLANT_ARGS) == 2
