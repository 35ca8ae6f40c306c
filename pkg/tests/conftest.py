"""
测试公共夹具

银原子指针、常温空气、固定 γ 的热库与缩放单位下的桌面算例
"""

import sys
from pathlib import Path

import pytest
from loguru import logger

# 添加项目根目录到路径
sys.path.insert(0, str(Path(__file__).parent.parent))

from src.decoherence.observables import desk_case
from src.params import SCALED, SI, GasConfig, PointerConfig, bath_from_rates
from src.params.presets import gas_preset, pointer_preset


@pytest.fixture(autouse=True)
def _quiet_logs(monkeypatch):
    """测试中不写日志文件"""
    monkeypatch.setenv('DECOHERENCE_LOG_FILE', 'off')
    logger.remove()
    logger.add(sys.stderr, level='WARNING')
    yield


@pytest.fixture
def silver() -> PointerConfig:
    spec = pointer_preset('silver_pointer')
    return PointerConfig.from_probabilities(spec['M'], spec['Delta'], spec['Xbar'],
                                            prob_plus=spec['prob_plus'])


@pytest.fixture
def air() -> GasConfig:
    spec = gas_preset('air_bath')
    phi0 = spec['phi0_thermal_multiple'] * 1.5 * SI.k_B * spec['T']
    return GasConfig(m=spec['m'], n0=spec['n0'], T=spec['T'], a=spec['a'], phi0=phi0)


@pytest.fixture
def pinned_bath(silver):
    """γ = 2.5e9 s⁻¹，300 K"""
    return bath_from_rates(silver, 2.5e9, 300.0, SI)


@pytest.fixture
def desk():
    """X̄ = 5Δ，γ = 1，g(γt=1) = 1"""
    return desk_case()


@pytest.fixture
def desk_pointer() -> PointerConfig:
    return PointerConfig.from_probabilities(M=1.0, Delta=1.0, Xbar=5.0, prob_plus=0.5)


@pytest.fixture
def scaled():
    return SCALED
