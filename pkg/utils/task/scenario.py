#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
场景配置

ScenarioConfig 是经过校验、完全解析的场景描述。来源可以是
config/scenarios.json 中的参数字典，也可以是扁平 key = value 文件；
键名带单位后缀。
"""

from dataclasses import asdict, dataclass, field
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from utils.config_manager import FlatEntry
from utils.errors import ConfigError
from utils.potential import PotentialProfile, build_double_barrier

MODES = ('poles', 'snapshot', 'trace', 'timescales', 'validate', 'transmission')
REGIONS = ('external', 'internal', 'both')
TIME_SCHEDULES = ('fixed', 'maxima_minima')
INCIDENCE_FIELDS = ('energy_mev', 'delta_e_gamma', 'delta_e_gammas')


def _to_float(value: Any) -> float:
    if isinstance(value, bool):
        raise ValueError("布尔值不能作为数值")
    return float(value)


def _to_int(value: Any) -> int:
    if isinstance(value, bool):
        raise ValueError("布尔值不能作为整数")
    if isinstance(value, float) and not value.is_integer():
        raise ValueError(f"不是整数: {value}")
    return int(value)


def _to_bool(value: Any) -> bool:
    if isinstance(value, bool):
        return value
    text = str(value).strip().lower()
    if text in ('true', 'yes', 'on', '1'):
        return True
    if text in ('false', 'no', 'off', '0'):
        return False
    raise ValueError(f"不是布尔值: {value}")


def _to_str(value: Any) -> str:
    return str(value).strip()


def _to_float_list(value: Any) -> List[float]:
    if isinstance(value, str):
        items = [item for item in value.split(',') if item.strip()]
    elif isinstance(value, (list, tuple)):
        items = list(value)
    else:
        items = [value]
    return [_to_float(item) for item in items]


def _to_range(value: Any) -> Tuple[float, float]:
    """'10:200' 或 [10, 200]"""
    items = value.split(':') if isinstance(value, str) else list(value)
    if len(items) != 2:
        raise ValueError(f"区间应为 最小:最大，得到 {value}")
    return _to_float(items[0]), _to_float(items[1])


@dataclass
class ScenarioConfig:
    """
    场景配置

    时间参数用 ps（与输出一致），内部计算统一换算为 fs。
    入射条件三选一：energy_mev、delta_e_gamma（以 Γ 为单位的 ΔE）、
    delta_e_gammas（trace 模式下的多条 ΔE）。
    """
    mode: str
    name: Optional[str] = None

    barrier_height_mev: float = 230.0
    barrier_width_nm: float = 5.0
    well_width_nm: float = 5.0
    mass_ratio: float = 0.067

    energy_mev: Optional[float] = None
    delta_e_gamma: Optional[float] = None
    delta_e_gammas: Optional[List[float]] = None
    side: str = 'below'
    pole_index: int = 1

    poles: int = 10
    seed_scan_mev: Tuple[float, float] = (10.0, 200.0)
    tail_closure: bool = True

    # snapshot
    times_ps: List[float] = field(default_factory=list)
    time_schedule: str = 'fixed'
    region: str = 'external'
    x_min_nm: Optional[float] = None
    x_max_nm: float = 8000.0
    x_step_nm: float = 1.0

    # trace
    position_nm: Optional[float] = None
    t_min_ps: float = 0.001
    t_max_ps: float = 5.0
    t_step_ps: float = 0.001
    maxima_count: int = 3

    # timescales
    crossover_multiples: List[float] = field(default_factory=lambda: [1.0, 2.0, 3.14159, 5.0, 10.0])
    cycle_times_ps: List[float] = field(default_factory=list)

    # validate
    oracle_times_ps: List[float] = field(default_factory=lambda: [0.5, 1.0, 2.0])
    grid_x_min_nm: float = -3000.0
    grid_x_max_nm: float = 2000.0
    grid_dx_nm: float = 0.05
    grid_dt_fs: float = 0.1

    # transmission
    scan_e_min_mev: float = 1.0
    scan_e_max_mev: float = 460.0
    scan_step_mev: float = 0.02

    output_dir: str = 'output'

    @property
    def length_nm(self) -> float:
        return 2.0 * self.barrier_width_nm + self.well_width_nm

    def profile(self) -> PotentialProfile:
        return build_double_barrier(self.barrier_height_mev, self.barrier_width_nm, self.well_width_nm,
                                    self.mass_ratio)

    def incidence_field(self) -> Optional[str]:
        present = [name for name in INCIDENCE_FIELDS if getattr(self, name) is not None]
        return present[0] if present else None

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['seed_scan_mev'] = list(self.seed_scan_mev)
        return data

    @classmethod
    def from_mapping(cls, data: Mapping[str, Any], lines: Optional[Mapping[str, int]] = None) -> 'ScenarioConfig':
        """
        从字典构造并校验

        Args:
            data: 参数字典（值可以是字符串或原生类型）
            lines: 字段到源文件行号的映射，用于诊断

        Raises:
            ConfigError: 未知字段、类型错误或组合不一致
        """
        lines = dict(lines or {})
        if not data:
            raise ConfigError("场景配置为空")
        if 'mode' not in data:
            raise ConfigError("缺少运行模式", field='mode')

        kwargs: Dict[str, Any] = {}
        for key, value in data.items():
            converter = _CONVERTERS.get(key)
            if converter is None:
                raise ConfigError("未知字段", line=lines.get(key), field=key)
            if value is None:
                kwargs[key] = None
                continue
            try:
                kwargs[key] = converter(value)
            except (TypeError, ValueError) as e:
                raise ConfigError(f"无法解析值 {value!r}: {e}", line=lines.get(key), field=key) from e

        config = cls(**kwargs)
        config.validate(lines)
        return config

    @classmethod
    def from_flat(cls, entries: Mapping[str, FlatEntry], overrides: Optional[Mapping[str, Any]] = None
                  ) -> 'ScenarioConfig':
        """从扁平配置项构造，overrides 中的值（如命令行参数）优先"""
        data: Dict[str, Any] = {key: entry.value for key, entry in entries.items()}
        lines = {key: entry.line for key, entry in entries.items()}
        for key, value in (overrides or {}).items():
            if value is not None:
                data[key] = value
                lines.pop(key, None)
        return cls.from_mapping(data, lines)

    def validate(self, lines: Optional[Mapping[str, int]] = None) -> None:
        """
        校验字段组合

        Raises:
            ConfigError: 第一个不一致的字段
        """
        lines = dict(lines or {})

        def fail(name: str, message: str):
            raise ConfigError(message, line=lines.get(name), field=name)

        if self.mode not in MODES:
            fail('mode', f"未知模式 {self.mode!r}，可选 {', '.join(MODES)}")
        for name in ('barrier_width_nm', 'well_width_nm', 'mass_ratio'):
            if not getattr(self, name) > 0:
                fail(name, "必须为正")
        if self.barrier_height_mev < 0:
            fail('barrier_height_mev', "不能为负")
        if self.poles < 1:
            fail('poles', "极点数至少为 1")
        if self.pole_index < 1:
            fail('pole_index', "极点序号从 1 开始")
        if not 0 < self.seed_scan_mev[0] < self.seed_scan_mev[1]:
            fail('seed_scan_mev', "应满足 0 < 最小 < 最大")

        present = [name for name in INCIDENCE_FIELDS if getattr(self, name) is not None]
        if len(present) > 1:
            fail(present[1], f"入射条件只能给出一种，已给出 {', '.join(present)}")
        if not present and self.mode != 'transmission':
            fail('energy_mev', "缺少入射条件（energy_mev、delta_e_gamma 或 delta_e_gammas）")
        if self.energy_mev is not None and not self.energy_mev > 0:
            fail('energy_mev', "入射能量必须为正")
        if self.delta_e_gamma is not None and self.delta_e_gamma < 0:
            fail('delta_e_gamma', "ΔE 不能为负")
        if self.delta_e_gammas is not None:
            if self.mode != 'trace':
                fail('delta_e_gammas', "多条 ΔE 仅用于 trace 模式")
            if not self.delta_e_gammas or any(v < 0 for v in self.delta_e_gammas):
                fail('delta_e_gammas', "应为非空的非负数列表")
        if self.side not in ('below', 'above'):
            fail('side', "只能是 below 或 above")

        validator = getattr(self, f'_validate_{self.mode}')
        validator(fail)

    def _validate_poles(self, fail: Callable) -> None:
        pass

    def _validate_timescales(self, fail: Callable) -> None:
        if self.maxima_count < 1:
            fail('maxima_count', "至少为 1")
        if any(m <= 0 for m in self.crossover_multiples):
            fail('crossover_multiples', "ΔE 倍数必须为正")
        if any(t < 0 for t in self.cycle_times_ps):
            fail('cycle_times_ps', "时间不能为负")

    def _validate_snapshot(self, fail: Callable) -> None:
        if self.region not in REGIONS:
            fail('region', f"只能是 {', '.join(REGIONS)}")
        if self.time_schedule not in TIME_SCHEDULES:
            fail('time_schedule', f"只能是 {', '.join(TIME_SCHEDULES)}")
        if self.time_schedule == 'fixed':
            if not self.times_ps:
                fail('times_ps', "snapshot 模式需要至少一个时刻")
            if any(t <= 0 for t in self.times_ps):
                fail('times_ps', "时刻必须为正")
        elif self.maxima_count < 1:
            fail('maxima_count', "至少为 1")
        if self.x_step_nm <= 0:
            fail('x_step_nm', "步长必须为正")
        x_min = self.resolved_x_min()
        if x_min < 0:
            fail('x_min_nm', "位置不能为负（解只在 x ≥ 0 定义）")
        if self.region == 'external' and x_min < self.length_nm:
            fail('x_min_nm', f"外部区快照要求 x_min ≥ L = {self.length_nm} nm")
        upper = self.length_nm if self.region == 'internal' else self.x_max_nm
        if not x_min < upper:
            fail('x_max_nm', f"位置区间为空: [{x_min}, {upper}]")

    def _validate_trace(self, fail: Callable) -> None:
        if self.position_nm is None:
            fail('position_nm', "trace 模式需要观测位置")
        if self.position_nm < 0:
            fail('position_nm', "位置不能为负")
        if not 0 < self.t_min_ps < self.t_max_ps:
            fail('t_max_ps', "应满足 0 < t_min < t_max")
        if self.t_step_ps <= 0:
            fail('t_step_ps', "步长必须为正")
        if self.maxima_count < 1:
            fail('maxima_count', "至少为 1")

    def _validate_validate(self, fail: Callable) -> None:
        if not self.oracle_times_ps or any(t <= 0 for t in self.oracle_times_ps):
            fail('oracle_times_ps', "应为非空的正时刻列表")
        if not self.grid_x_min_nm < 0 < self.length_nm < self.grid_x_max_nm:
            fail('grid_x_max_nm', "网格须满足 x_min < 0 < L < x_max")
        if self.grid_dx_nm <= 0:
            fail('grid_dx_nm', "步长必须为正")
        if self.grid_dt_fs <= 0:
            fail('grid_dt_fs', "步长必须为正")

    def _validate_transmission(self, fail: Callable) -> None:
        if not 0 < self.scan_e_min_mev < self.scan_e_max_mev:
            fail('scan_e_max_mev', "应满足 0 < 最小 < 最大")
        if self.scan_step_mev <= 0:
            fail('scan_step_mev', "步长必须为正")

    def resolved_x_min(self) -> float:
        """快照起点：外部区默认 L，其它默认 0"""
        if self.x_min_nm is not None:
            return self.x_min_nm
        return self.length_nm if self.region == 'external' else 0.0


_CONVERTERS: Dict[str, Callable[[Any], Any]] = {
    'mode': _to_str, 'name': _to_str,
    'barrier_height_mev': _to_float, 'barrier_width_nm': _to_float, 'well_width_nm': _to_float,
    'mass_ratio': _to_float,
    'energy_mev': _to_float, 'delta_e_gamma': _to_float, 'delta_e_gammas': _to_float_list,
    'side': _to_str, 'pole_index': _to_int,
    'poles': _to_int, 'seed_scan_mev': _to_range, 'tail_closure': _to_bool,
    'times_ps': _to_float_list, 'time_schedule': _to_str, 'region': _to_str,
    'x_min_nm': _to_float, 'x_max_nm': _to_float, 'x_step_nm': _to_float,
    'position_nm': _to_float, 't_min_ps': _to_float, 't_max_ps': _to_float, 't_step_ps': _to_float,
    'maxima_count': _to_int,
    'crossover_multiples': _to_float_list, 'cycle_times_ps': _to_float_list,
    'oracle_times_ps': _to_float_list, 'grid_x_min_nm': _to_float, 'grid_x_max_nm': _to_float,
    'grid_dx_nm': _to_float, 'grid_dt_fs': _to_float,
    'scan_e_min_mev': _to_float, 'scan_e_max_mev': _to_float, 'scan_step_mev': _to_float,
    'output_dir': _to_str,
}
