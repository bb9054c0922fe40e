#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""配置、输出、场景登记与命令行"""

import json
import os

import pytest

from main import EXIT_CONFIG, EXIT_NUMERICAL, EXIT_OK, main
from utils.config_manager import ConfigManager, deep_merge, parse_flat_config
from utils.errors import ConfigError, SimulationError
from utils.global_manager import RunState, global_manager, log_warning, running_operation
from utils.task import OutputWriter, ScenarioConfig, TaskManager, run_scenario, uniform_axis


def _flat(text: str) -> ScenarioConfig:
    return ScenarioConfig.from_flat(parse_flat_config(text))


# ---------------------------------------------------------------- 扁平配置

def test_parse_flat_config_keeps_lines_and_strips_comments():
    entries = parse_flat_config("# 注释\nmode = snapshot\n\nenergy_mev = 74.97  # meV\n")
    assert list(entries) == ['mode', 'energy_mev']
    assert entries['energy_mev'].value == '74.97'
    assert entries['energy_mev'].line == 4


@pytest.mark.parametrize('text, line, field', [
    ("mode = snapshot\nenergy_mev\n", 2, None),
    ("mode = snapshot\nenergy_mev =\n", 2, 'energy_mev'),
    ("mode = snapshot\nmode = trace\n", 2, 'mode'),
])
def test_parse_flat_config_errors(text, line, field):
    with pytest.raises(ConfigError) as info:
        parse_flat_config(text)
    assert info.value.line == line
    assert info.value.field == field
    assert f"第 {line} 行" in str(info.value)


# ---------------------------------------------------------------- 场景配置

def test_scenario_from_flat_file():
    config = _flat("mode = snapshot\nenergy_mev = 74.97\ntimes_ps = 2, 10\nseed_scan_mev = 10:200\n"
                   "tail_closure = yes\n")
    assert config.times_ps == [2.0, 10.0]
    assert config.seed_scan_mev == (10.0, 200.0)
    assert config.tail_closure is True
    assert config.resolved_x_min() == pytest.approx(15.0)
    assert config.profile().length == pytest.approx(15.0)
    assert config.to_dict()['seed_scan_mev'] == [10.0, 200.0]


def test_scenario_reports_offending_line():
    with pytest.raises(ConfigError) as info:
        _flat("mode = snapshot\nenergy_mev = 74.97\ntimes_ps = 2\nbarrier_width_nm = -5\n")
    assert info.value.field == 'barrier_width_nm'
    assert info.value.line == 4

    with pytest.raises(ConfigError) as info:
        _flat("mode = snapshot\nenergy_mev = abc\ntimes_ps = 2\n")
    assert (info.value.field, info.value.line) == ('energy_mev', 2)

    with pytest.raises(ConfigError) as info:
        _flat("mode = snapshot\nenergy = 74.97\n")
    assert (info.value.field, info.value.line) == ('energy', 2)


def test_scenario_requires_exactly_one_incidence():
    with pytest.raises(ConfigError) as info:
        _flat("mode = snapshot\nenergy_mev = 74.97\ndelta_e_gamma = 5\ntimes_ps = 2\n")
    assert info.value.field == 'delta_e_gamma'
    with pytest.raises(ConfigError):
        _flat("mode = snapshot\ntimes_ps = 2\n")
    with pytest.raises(ConfigError) as info:
        _flat("mode = snapshot\ndelta_e_gammas = 2, 5\ntimes_ps = 2\n")
    assert info.value.field == 'delta_e_gammas'
    assert _flat("mode = transmission\n").incidence_field() is None


def test_scenario_mode_checks():
    with pytest.raises(ConfigError):
        ScenarioConfig.from_mapping({})
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_mapping({'energy_mev': 74.97})
    assert info.value.field == 'mode'
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_mapping({'mode': 'movie', 'energy_mev': 74.97})
    assert info.value.field == 'mode'
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_mapping({'mode': 'snapshot', 'energy_mev': 74.97, 'times_ps': [2.0],
                                     'x_min_nm': 5.0})
    assert info.value.field == 'x_min_nm'
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_mapping({'mode': 'trace', 'energy_mev': 74.97})
    assert info.value.field == 'position_nm'
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_mapping({'mode': 'validate', 'energy_mev': 74.97, 'grid_x_min_nm': 10.0})
    assert info.value.field == 'grid_x_max_nm'


def test_overrides_take_precedence():
    entries = parse_flat_config("mode = snapshot\nenergy_mev = 74.97\ntimes_ps = 2\npoles = 10\n")
    config = ScenarioConfig.from_flat(entries, {'poles': 4, 'output_dir': None})
    assert config.poles == 4
    assert config.output_dir == 'output'


# ---------------------------------------------------------------- 输出

def test_output_writer_formats_and_records(tmp_path):
    writer = OutputWriter(str(tmp_path))
    path = writer.write_csv('table.csv', {'x_nm': [0.1, 2.0], 'flag': [True, False], 'n': [1, 2]})
    with open(path, 'rb') as f:
        content = f.read()
    assert content == b"x_nm,flag,n\n0.10000000000000001,true,1\n2,false,2\n"
    assert global_manager.get('run.outputs') == [path]

    with pytest.raises(ValueError):
        writer.write_csv('bad.csv', {'a': [1, 2], 'b': [1]})

    json_path = writer.write_json('value.json', {'z': 1 + 2j})
    with open(json_path, encoding='utf-8') as f:
        assert json.load(f) == {'z': {'re': 1.0, 'im': 2.0}}

    manifest = writer.write_manifest({'mode': 'poles'}, {'length_nm': 15.0}, ['说明'])
    with open(manifest, encoding='utf-8') as f:
        data = json.load(f)
    assert [item['file'] for item in data['outputs']] == ['table.csv', 'value.json']
    assert data['notes'] == ['说明']
    assert data['code_version']


def test_uniform_axis_is_reproducible():
    axis = uniform_axis(0.001, 5.0, 0.001)
    assert axis.size == 5000
    assert axis[0] == 0.001 and axis[-1] == 5.0


# ---------------------------------------------------------------- 全局状态与设置

def test_running_operation_records_failure():
    with pytest.raises(SimulationError):
        with running_operation('outer'):
            with running_operation('inner'):
                raise SimulationError("失败")
    assert global_manager.get('run.failed_operation') == 'inner'
    assert global_manager.get('run.state') == RunState.ERROR
    assert global_manager.get('run.operation') is None


def test_log_sink_and_listeners():
    class Sink:
        def __init__(self):
            self.records = []

        def add_log(self, level, message):
            self.records.append((level, message))

    sink = Sink()
    changes = []
    global_manager.set('log_sink', sink)
    def listener(key, new, old):
        changes.append(new)

    global_manager.add_listener('run.state', listener)
    try:
        log_warning("网格偏粗")
        global_manager.begin_run('poles')
        global_manager.finish_run()
    finally:
        global_manager.remove_listener('run.state', listener)
    assert sink.records == [('WARNING', "网格偏粗")]
    assert changes == [RunState.RUNNING, RunState.FINISHED]


def test_config_manager_dotted_keys(tmp_path):
    path = tmp_path / 'settings.json'
    settings = ConfigManager(str(path))
    settings.set('general.log_level', 'DEBUG')
    assert settings.save_config()
    assert ConfigManager(str(path)).get('general.log_level') == 'DEBUG'
    assert settings.delete('general.log_level')
    assert settings.get('general.log_level', 'INFO') == 'INFO'
    assert deep_merge({'a': {'b': 1, 'c': 2}}, {'a': {'c': 3}}) == {'a': {'b': 1, 'c': 3}}


# ---------------------------------------------------------------- 场景登记与运行

def test_registry_builds_configs():
    manager = TaskManager()
    assert {'fig1', 'fig2', 'fig3', 'validate', 'transmission'} <= set(manager.scenarios)
    config = manager.build_config('fig1')
    assert config.mode == 'snapshot'
    assert config.energy_mev == pytest.approx(74.97)
    assert config.poles == 10
    assert os.path.basename(config.output_dir) == 'fig1'
    assert manager.build_config('fig3', {'poles': 6}).poles == 6
    with pytest.raises(ConfigError):
        manager.build_config('missing')


def test_transmission_run_is_deterministic(tmp_path):
    outputs = []
    for name in ('a', 'b'):
        config = ScenarioConfig.from_mapping({'mode': 'transmission', 'scan_e_min_mev': 1.0,
                                              'scan_e_max_mev': 200.0, 'scan_step_mev': 0.1,
                                              'output_dir': str(tmp_path / name)})
        result = run_scenario(config)
        assert result.manifest is not None and os.path.exists(result.manifest)
        with open(tmp_path / name / 'transmission.csv', 'rb') as f:
            outputs.append(f.read())
    assert outputs[0] == outputs[1]
    assert outputs[0].startswith(b"energy_mev,transmission,reflection\n")
    assert b"\r\n" not in outputs[0]

    with open(tmp_path / 'a' / 'peaks.json', encoding='utf-8') as f:
        peaks = json.load(f)
    assert any(abs(peak['energy'] - 80.1) < 0.5 for peak in peaks)
    assert global_manager.get('run.state') == RunState.FINISHED


def test_timescales_run_writes_report(tmp_path):
    config = ScenarioConfig.from_mapping({'mode': 'timescales', 'delta_e_gamma': 5.0, 'poles': 4,
                                          'cycle_times_ps': [2.4], 'output_dir': str(tmp_path)})
    run_scenario(config)
    with open(tmp_path / 'timescales.json', encoding='utf-8') as f:
        report = json.load(f)
    assert report['tau_r_fs'] == pytest.approx(report['tau_l_fs'] * 3.141592653589793 / 5.0, rel=1e-6)
    assert 2.9 <= report['cycles'][0]['cycles'] <= 3.1
    assert report['crossover'] is True
    with open(tmp_path / 'crossover.csv', encoding='utf-8') as f:
        assert f.readline().strip() == 'delta_e_over_gamma,delta_e_mev,tau_r_fs,tau_l_fs,crossover'


def _run(tmp_path, name: str, mapping: dict) -> dict:
    """运行一个小规模场景，返回清单内容"""
    config = ScenarioConfig.from_mapping(dict(mapping, output_dir=str(tmp_path / name)))
    result = run_scenario(config)
    with open(result.manifest, encoding='utf-8') as f:
        return json.load(f)


def _read_csv_header(path) -> str:
    with open(path, encoding='utf-8') as f:
        return f.readline().strip()


def test_poles_run_writes_table(tmp_path):
    manifest = _run(tmp_path, 'poles', {'mode': 'poles', 'energy_mev': 74.97, 'poles': 3})
    assert [item['file'] for item in manifest['outputs']] == ['poles.csv']
    with open(tmp_path / 'poles' / 'poles.csv', encoding='utf-8') as f:
        lines = f.read().splitlines()
    assert lines[0].startswith('n,a_n_per_nm,b_n_per_nm,energy_mev,width_mev')
    assert 'residue_residual' in lines[0]
    assert len(lines) == 4
    first = dict(zip(lines[0].split(','), lines[1].split(',')))
    assert first['n'] == '1'
    assert float(first['energy_mev']) == pytest.approx(80.1, abs=0.5)
    assert manifest['resolved']['incidence'][0]['pole_index'] == 1


def test_snapshot_run_writes_profile_and_front(tmp_path):
    manifest = _run(tmp_path, 'snapshot', {'mode': 'snapshot', 'energy_mev': 74.97, 'times_ps': [2.0],
                                           'x_max_nm': 2000.0, 'x_step_nm': 2.0, 'poles': 4})
    files = {item['file'] for item in manifest['outputs']}
    assert files == {'snapshot_external_00_t2ps.csv', 'wavefront.json'}
    header = _read_csv_header(tmp_path / 'snapshot' / 'snapshot_external_00_t2ps.csv')
    assert header == 'x_nm,re_psi,im_psi,density_normalized'
    with open(tmp_path / 'snapshot' / 'wavefront.json', encoding='utf-8') as f:
        fronts = json.load(f)
    assert fronts[0]['front_nm'] > 0.9 * fronts[0]['classical_front_nm']


def test_trace_run_writes_maxima(tmp_path):
    manifest = _run(tmp_path, 'trace', {'mode': 'trace', 'delta_e_gamma': 5.0, 'position_nm': 15.0,
                                        't_min_ps': 0.01, 't_max_ps': 1.5, 't_step_ps': 0.005,
                                        'maxima_count': 1, 'poles': 4})
    assert {item['file'] for item in manifest['outputs']} == {'trace_dE5G.csv', 'maxima.json'}
    assert _read_csv_header(tmp_path / 'trace' / 'trace_dE5G.csv') == 't_ps,density_normalized,re_psi,im_psi'
    with open(tmp_path / 'trace' / 'maxima.json', encoding='utf-8') as f:
        summary = json.load(f)
    assert summary[0]['label_delta_e_gamma'] == 5.0
    assert summary[0]['first_peak_before_lifetime'] is True


def test_validate_run_on_small_grid(tmp_path):
    manifest = _run(tmp_path, 'validate', {'mode': 'validate', 'energy_mev': 74.97, 'poles': 4,
                                           'oracle_times_ps': [0.1], 'grid_x_min_nm': -200.0,
                                           'grid_x_max_nm': 420.0, 'grid_dx_nm': 0.1, 'grid_dt_fs': 0.5})
    files = {item['file'] for item in manifest['outputs']}
    assert {'oracle_report.json', 'faddeeva_map.csv', 'oracle_00_t0.1ps.csv', 'analytic_00_t0.1ps.csv'} == files
    with open(tmp_path / 'validate' / 'oracle_report.json', encoding='utf-8') as f:
        report = json.load(f)
    assert report['validity_horizon_fs'] >= 100.0
    assert len(report['residue_residuals']) == 4
    assert '1' in report['residue_residuals']


def test_repeated_runs_are_byte_identical(tmp_path):
    mapping = {'mode': 'snapshot', 'delta_e_gamma': 5.0, 'times_ps': [0.5, 1.0], 'region': 'both',
               'x_min_nm': 0.0, 'x_max_nm': 300.0, 'x_step_nm': 0.5, 'poles': 4}
    first = _run(tmp_path, 'a', mapping)
    second = _run(tmp_path, 'b', mapping)
    assert first['outputs'] == second['outputs']
    assert len(first['outputs']) == 5
    for item in first['outputs']:
        with open(tmp_path / 'a' / item['file'], 'rb') as a, open(tmp_path / 'b' / item['file'], 'rb') as b:
            assert a.read() == b.read()


# ---------------------------------------------------------------- 命令行

def test_cli_without_command_is_usage_error():
    assert main([]) == EXIT_CONFIG


def test_cli_requires_config_source():
    assert main(['snapshot']) == EXIT_CONFIG


def test_cli_reports_bad_config(tmp_path):
    path = tmp_path / 'bad.cfg'
    path.write_text("mode = snapshot\nenergy_mev = 74.97\n", encoding='utf-8')
    assert main(['snapshot', '--config', str(path), '--out', str(tmp_path / 'out')]) == EXIT_CONFIG


def test_cli_rejects_mismatched_scenario():
    assert main(['trace', '--scenario', 'fig1']) == EXIT_CONFIG


def test_cli_transmission_run(tmp_path):
    path = tmp_path / 'scan.cfg'
    path.write_text("mode = transmission\nscan_e_min_mev = 1\nscan_e_max_mev = 100\nscan_step_mev = 0.5\n",
                    encoding='utf-8')
    out = tmp_path / 'out'
    assert main(['transmission', '--config', str(path), '--out', str(out), '--log-level', 'WARNING']) == EXIT_OK
    assert (out / 'transmission.csv').exists()
    assert (out / 'manifest.json').exists()


def test_cli_numerical_failure_exit_code(tmp_path):
    path = tmp_path / 'early.cfg'
    path.write_text("mode = snapshot\nenergy_mev = 74.97\ntimes_ps = 1e-7\nx_max_nm = 100\npoles = 2\n",
                    encoding='utf-8')
    assert main(['snapshot', '--config', str(path), '--out', str(tmp_path / 'out')]) == EXIT_NUMERICAL
    assert global_manager.get('run.failed_operation') == 'external_snapshot'
