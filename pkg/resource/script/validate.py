#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
基准验证脚本

Crank–Nicolson 网格解与解析解比较：oracle_report.json 给出误差、有效时间窗与范数漂移，
每个比较时刻写出网格解与解析解两份同格式的快照 CSV；另附留数检验与 Faddeeva 取值表。
"""

from typing import Any, Dict

from utils.global_manager import log_info, running_operation
from utils.oracle import GridSpec, analytic_on_grid, compare_with_analytic
from utils.resonance import residue_check
from utils.special import accuracy_map
from utils.task.mode_script import ModeScript


class ValidateScript(ModeScript):
    """基准验证"""

    mode = 'validate'

    def run(self) -> None:
        config = self.config
        spec = self.resolve_incidence()
        family = self.pole_family(spec.energy)
        grid = GridSpec(x_min=config.grid_x_min_nm, x_max=config.grid_x_max_nm, dx=config.grid_dx_nm,
                        dt=config.grid_dt_fs, t_end=max(config.oracle_times_ps) * 1000.0)

        with running_operation('compare_with_analytic'):
            report = compare_with_analytic(self.profile, family, spec.energy,
                                           [t * 1000.0 for t in config.oracle_times_ps], grid,
                                           tail_closure=config.tail_closure)

        for i, snapshot in enumerate(report.snapshots):
            t_ps = snapshot.t / 1000.0
            analytic = analytic_on_grid(self.profile, family, spec.energy, snapshot.x, snapshot.t,
                                        tail_closure=config.tail_closure)
            for name, psi in (('oracle', snapshot.psi), ('analytic', analytic)):
                self.writer.write_csv(f'{name}_{i:02d}_t{t_ps:.6g}ps.csv', {
                    'x_nm': snapshot.x,
                    're_psi': psi.real,
                    'im_psi': psi.imag,
                    'density': abs(psi) ** 2,
                })

        with running_operation('residue_check'):
            residues = {entry.pole.index: abs(residue_check(self.profile, entry.pole, entry.state))
                        for entry in family}

        data = report.to_dict()
        data['residue_residuals'] = residues
        self.writer.write_json('oracle_report.json', data)

        table = accuracy_map()
        self.writer.write_csv('faddeeva_map.csv', {name: table[name] for name in table.dtype.names})
        log_info(f"基准验证完成，最大相对误差 {report.max_error:.3e}")


def create_script(settings: Dict[str, Any]):
    """脚本入口：settings 为 ScenarioConfig"""
    return ValidateScript(settings)
