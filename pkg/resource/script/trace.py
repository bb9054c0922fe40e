#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
时间序列脚本

固定位置 x 的 |Ψ(x, t)/参考|²，每个入射条件一个 CSV；
maxima.json 汇总前 M 个极大的时刻与 τ_m、τ_l 的对照。
"""

from typing import Any, Dict, List, Optional

from utils.global_manager import log_info, running_operation
from utils.task.mode_script import ModeScript, uniform_axis
from utils.transient import IncidenceSpec, locate_maxima, maxima_phase_deviation


class TraceScript(ModeScript):
    """时间序列"""

    mode = 'trace'

    def incidences(self) -> List[tuple]:
        """(文件名标签, ΔE/Γ 或 None, IncidenceSpec)"""
        config = self.config
        if config.delta_e_gammas is not None:
            return [(f'dE{g:g}G', g, self.resolve_incidence(g)) for g in config.delta_e_gammas]
        spec = self.resolve_incidence()
        if config.delta_e_gamma is not None:
            return [(f'dE{config.delta_e_gamma:g}G', config.delta_e_gamma, spec)]
        return [(f'E{spec.energy:.6g}meV', None, spec)]

    def run(self) -> None:
        config = self.config
        t_fs = uniform_axis(config.t_min_ps, config.t_max_ps, config.t_step_ps) * 1000.0
        incidences = self.incidences()
        for _, _, spec in incidences:
            self.pole_family(spec.energy)

        def compute(item):
            label, _, spec = item
            with running_operation(f'trace[{label}]'):
                return self.manager.trace(spec.energy, config.position_nm, t_fs)

        traces = self.map_parallel(compute, incidences)
        summary = []
        for (label, gamma, spec), trace in zip(incidences, traces):
            self.writer.write_csv(f'trace_{label}.csv', {
                't_ps': trace.t / 1000.0,
                'density_normalized': trace.density,
                're_psi': trace.psi.real,
                'im_psi': trace.psi.imag,
            })
            summary.append(self._maxima_summary(trace, spec, gamma))

        self.writer.write_json('maxima.json', summary)
        log_info(f"时间序列完成: {len(summary)} 条，位置 x = {config.position_nm} nm")

    def _maxima_summary(self, trace, spec: IncidenceSpec, gamma: Optional[float]) -> Dict[str, Any]:
        scales = self.manager.time_scales(spec.energy, self.config.maxima_count, spec.pole_index)
        # 积累极大不早于 τ_1 的一半，更早的是快门打开时的直接透射脉冲
        t_start = 0.5 * scales.tau_m[0] if scales.tau_m else 0.0
        times = locate_maxima(trace, self.config.maxima_count, t_start=t_start)
        entry = {
            'label_delta_e_gamma': gamma,
            'energy_mev': spec.energy,
            'maxima_fs': times,
            'tau_m_fs': scales.tau_m,
            'tau_l_fs': scales.tau_l,
            'first_peak_before_lifetime': bool(times.size and times[0] < scales.tau_l),
        }
        if scales.omega > 0:
            entry['phase_deviation_rad'] = maxima_phase_deviation(times, scales.omega)
        return entry


def create_script(settings: Dict[str, Any]):
    """脚本入口：settings 为 ScenarioConfig"""
    return TraceScript(settings)
