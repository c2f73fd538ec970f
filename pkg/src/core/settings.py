"""
模块名称: Global Settings (全局配置)
功能描述:

    管理全项目的配置参数，包括数值容差、量子比特数上限、并发线程数、随机数算法、输出目录和协议表路径。
    通过 dataclass 定义默认值，启动时从环境变量 (.env) 覆盖。

设计理念:

    1.  **集中管理**: 所有容差和上限都汇聚于此，避免魔法数字散落在各个模块。
    2.  **环境覆盖**: 支持通过 `config/app.env` 或环境变量调整输出目录、线程数等。
    3.  **默认值机制**: 默认值即为协议校验使用的数值 (1e-10、1e-14 等)，开箱即用。

线程安全性:

    - 配置对象在启动时初始化，运行时只读，因此是线程安全的。

依赖关系:

    - 标准库 `os`, `dataclasses`, `pathlib`.
    - `python-dotenv` 由入口 `app.py` 提前加载。
"""

import os
from pathlib import Path
from dataclasses import dataclass, field
from typing import Optional


# [定义类] ##############################################################################################################
# [应用配置类] ===========================================================================================================
@dataclass
class Settings:
    """应用配置类"""

    # ========== 数值容差 ==========
    tolerance: float = 1e-10
    zero_probability_cutoff: float = 1e-14
    entropy_clamp: float = 1e-12
    negative_eigenvalue_limit: float = 1e-8
    factorization_tolerance: float = 1e-8

    # ========== 规模上限 ==========
    statevector_max_qubits: int = 16
    density_max_qubits: int = 10
    operator_max_qubits: int = 12
    ghz_basis_max_qubits: int = 12
    ensemble_max_qubits: int = 8
    nparty_teleport_max_qubits: int = 6

    # ========== 运行配置 ==========
    max_workers: int = 4
    rng_algorithm: str = "PCG64"

    # ========== 路径配置 ==========
    project_root: Path = field(default_factory=lambda: Path(__file__).parent.parent.parent)
    config_dir: Path = field(init=False)
    output_dir: Path = field(init=False)
    protocol_tables_path: Path = field(init=False)

    def __post_init__(self):
        """初始化后处理"""
        # [step1] 初始化目录路径
        self.config_dir = self.project_root / "config"
        self.output_dir = self.project_root / "results"
        self.protocol_tables_path = self.config_dir / "protocol_tables.yaml"

        # [step2] 从环境变量加载配置
        self._load_from_env()

        # [step3] 验证配置
        self._validate()

    def _load_from_env(self):
        """从环境变量加载配置"""
        # [step1] 加载路径
        if output_dir := os.getenv("GHZ_OUTPUT_DIR"):
            self.output_dir = Path(output_dir)
        if tables_path := os.getenv("PROTOCOL_TABLES_PATH"):
            self.protocol_tables_path = Path(tables_path)

        # [step2] 加载并发配置
        if max_workers := os.getenv("MAX_WORKERS"):
            try:
                self.max_workers = int(max_workers)
            except ValueError:
                pass

    def _validate(self):
        """验证配置的合法性"""
        if self.max_workers < 1:
            raise ValueError("MAX_WORKERS 必须为正整数")

        if self.density_max_qubits > self.statevector_max_qubits:
            raise ValueError("密度矩阵比特上限不能超过态矢量比特上限")


# [定义函数] ############################################################################################################
# [获取设置] ===========================================================================================================
_settings_cache: Optional[Settings] = None

def get_settings() -> Settings:
    """
    获取全局配置单例。
    :return: Settings 对象
    """
    global _settings_cache
    if _settings_cache is None:
        _settings_cache = Settings()
    return _settings_cache

# [导出单例] ==============================================================================================================
settings = get_settings()
