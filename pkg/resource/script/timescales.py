#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
时间尺度脚本

timescales.json：ω、τ_m、τ_r、τ_l、τ_b、经验积累时间与给定时刻的积累周期数；
crossover.csv：ΔE = 倍数·Γ 扫描下 τ_r 与 τ_l 的比较。
"""

from typing import Any, Dict

from utils.global_manager import log_info, running_operation
from utils.task.mode_script import ModeScript
from utils.transient import buildup_cycle_count, crossover_sweep, empirical_buildup_time


class TimeScalesScript(ModeScript):
    """时间尺度"""

    mode = 'timescales'

    def run(self) -> None:
        config = self.config
        spec = self.resolve_incidence()
        pole = self.pole_family(spec.energy).by_index(spec.pole_index).pole

        with running_operation('time_scales'):
            scales = self.manager.time_scales(spec.energy, config.maxima_count, spec.pole_index)
        report = scales.to_dict()
        report['energy_mev'] = spec.energy
        report['resonance_energy_mev'] = pole.energy
        if scales.omega > 0:
            report['empirical_buildup_fs'] = empirical_buildup_time(pole.width, scales.omega,
                                                                    constants=pole.constants)
        report['cycles'] = [
            {'t_ps': t, 'cycles': buildup_cycle_count(spec.energy, pole, t * 1000.0)}
            for t in config.cycle_times_ps
        ]
        self.writer.write_json('timescales.json', report)

        rows = [{
            'delta_e_over_gamma': row.multiple,
            'delta_e_mev': row.delta_e,
            'tau_r_fs': row.tau_r,
            'tau_l_fs': row.tau_l,
            'crossover': row.crossover,
        } for row in crossover_sweep(pole, config.crossover_multiples)]
        self.writer.write_rows('crossover.csv', rows)
        log_info(f"τ_l = {scales.tau_l:.2f} fs，τ_b = {scales.tau_b:.2f} fs，τ_r = {scales.tau_r}")


def create_script(settings: Dict[str, Any]):
    """脚本入口：settings 为 ScenarioConfig"""
    return TimeScalesScript(settings)
