#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
透射谱脚本

transmission.csv：实轴能量扫描的 |t|² 与 |r|²；peaks.json：共振峰位置、半高全宽与峰值。
"""

from dataclasses import asdict
from typing import Any, Dict

from utils.global_manager import log_info, running_operation
from utils.resonance import resonance_peaks
from utils.scattering import transmission_scan
from utils.task.mode_script import ModeScript, uniform_axis


class TransmissionScript(ModeScript):
    """透射谱"""

    mode = 'transmission'

    def run(self) -> None:
        config = self.config
        energies = uniform_axis(config.scan_e_min_mev, config.scan_e_max_mev, config.scan_step_mev)
        with running_operation('transmission_scan'):
            transmission, reflection = transmission_scan(self.profile, energies)
        self.writer.write_csv('transmission.csv', {
            'energy_mev': energies,
            'transmission': transmission,
            'reflection': reflection,
        })

        if not self.profile.is_free:
            upper = min(config.scan_e_max_mev, 4.0 * float(self.profile.heights.max()))
            with running_operation('resonance_peaks'):
                peaks = resonance_peaks(self.profile, (config.scan_e_min_mev, upper), config.scan_step_mev)
        else:
            peaks = []
        self.writer.write_json('peaks.json', [asdict(peak) for peak in peaks])
        log_info(f"透射谱完成: {energies.size} 个能量点，{len(peaks)} 个共振峰")


def create_script(settings: Dict[str, Any]):
    """脚本入口：settings 为 ScenarioConfig"""
    return TransmissionScript(settings)
