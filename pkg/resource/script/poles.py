#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
极点表脚本

输出 poles.csv：序号、a_n、b_n、ε_n、Γ_n、孤立度、归一化残差与留数检验残差。
"""

from typing import Dict, Any

from utils.global_manager import log_info, running_operation
from utils.resonance import residue_check
from utils.task.mode_script import ModeScript


class PolesScript(ModeScript):
    """极点表"""

    mode = 'poles'

    def run(self) -> None:
        spec = self.resolve_incidence()
        family = self.pole_family(spec.energy)

        rows = family.table()
        with running_operation('residue_check'):
            residues = {entry.pole.index: abs(residue_check(self.profile, entry.pole, entry.state))
                        for entry in family}
        for row in rows:
            row['residue_residual'] = residues[row['n']]
            row['lifetime_fs'] = family.by_index(row['n']).pole.lifetime

        self.writer.write_rows('poles.csv', rows)
        log_info(f"极点表共 {len(rows)} 行")


def create_script(settings: Dict[str, Any]):
    """脚本入口：settings 为 ScenarioConfig"""
    return PolesScript(settings)
