#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
快照脚本

固定时刻的 Ψ(x, t)：每个时刻、每个区域一个 CSV，外部区另附波前报告 wavefront.json。
time_schedule = maxima_minima 时，时刻取 τ_1..τ_M 与余弦极小 2πℏm/ΔE（m = 1..M）。
"""

from typing import Any, Dict, List

import numpy as np

from utils.errors import InvalidParameterError
from utils.global_manager import log_info, log_warning, running_operation
from utils.task.mode_script import ModeScript, uniform_axis
from utils.transient import IncidenceSpec, WaveSnapshot, locate_wavefront, split_regions


class SnapshotScript(ModeScript):
    """快照"""

    mode = 'snapshot'

    def schedule(self, spec: IncidenceSpec) -> List[float]:
        """快照时刻（ps）"""
        config = self.config
        if config.time_schedule == 'fixed':
            return [float(t) for t in config.times_ps]

        if spec.delta_e == 0:
            raise InvalidParameterError("共振入射下没有积累振荡，maxima_minima 时刻表无定义")
        hbar = self.profile.constants.hbar
        count = config.maxima_count
        maxima = [(2 * m - 1) * np.pi * hbar / spec.delta_e / 1000.0 for m in range(1, count + 1)]
        minima = [2 * m * np.pi * hbar / spec.delta_e / 1000.0 for m in range(1, count + 1)]
        self.notes.append("快照时刻为重构值：τ_m 振荡极大与 2πℏm/ΔE 余弦极小")
        self.resolved['reconstructed_times_ps'] = {'maxima': maxima, 'minima': minima}
        return sorted(maxima + minima)

    def run(self) -> None:
        config = self.config
        spec = self.resolve_incidence()
        family = self.pole_family(spec.energy)
        times_ps = self.schedule(spec)

        x = uniform_axis(config.resolved_x_min(), config.x_max_nm, config.x_step_nm)
        inside, outside = split_regions(x, self.profile.length)
        regions = {'internal': x[inside], 'external': x[outside]}
        if config.region == 'internal':
            regions.pop('external')
        elif config.region == 'external':
            regions.pop('internal')
        regions = {name: points for name, points in regions.items() if points.size}

        jobs = [(name, i, t) for name in regions for i, t in enumerate(times_ps)]

        def compute(job):
            name, _, t_ps = job
            with running_operation(f'{name}_snapshot'):
                return self.manager.snapshot(spec.energy, regions[name], t_ps * 1000.0, name)

        snapshots = self.map_parallel(compute, jobs)
        fronts = []
        for (name, i, t_ps), snapshot in zip(jobs, snapshots):
            self.writer.write_csv(f'snapshot_{name}_{i:02d}_t{t_ps:.6g}ps.csv', self._columns(snapshot))
            if name == 'external':
                fronts.append(self._front(snapshot, spec, family))

        if fronts:
            self.writer.write_json('wavefront.json', fronts)
        log_info(f"快照完成: {len(snapshots)} 个（{', '.join(regions)}）")

    @staticmethod
    def _columns(snapshot: WaveSnapshot) -> Dict[str, Any]:
        columns = {
            'x_nm': snapshot.x,
            're_psi': snapshot.psi.real,
            'im_psi': snapshot.psi.imag,
            'density_normalized': snapshot.density,
        }
        if snapshot.region == 'internal':
            columns['stationary_density'] = np.abs(snapshot.reference) ** 2
        return columns

    def _front(self, snapshot: WaveSnapshot, spec: IncidenceSpec, family) -> Dict[str, Any]:
        entry = {
            't_ps': snapshot.t / 1000.0,
            'classical_front_nm': self.manager.classical_front(spec.energy, snapshot.t),
            'resonant_front_nm': family.by_index(spec.pole_index).pole.front_speed * snapshot.t / 1000.0,
        }
        try:
            report = locate_wavefront(snapshot)
        except InvalidParameterError as e:
            log_warning(f"t = {snapshot.t:.1f} fs 无法定位波前: {e}")
            return entry
        entry.update({
            'front_nm': report.position,
            'threshold': report.threshold,
            'plateau_mean': report.plateau_mean,
            'sensitivity_nm': {f'{level:g}': position for level, position in report.sensitivity.items()},
        })
        return entry


def create_script(settings: Dict[str, Any]):
    """脚本入口：settings 为 ScenarioConfig"""
    return SnapshotScript(settings)
