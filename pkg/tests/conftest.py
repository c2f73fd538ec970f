"""pytest 公共配置：把项目根目录加入 sys.path，并提供常用的态与随机数夹具"""

import sys
from pathlib import Path

import numpy as np
import pytest

# 保证 `import src.*` 与 `import app` 可用
ROOT = Path(__file__).resolve().parent.parent
if str(ROOT) not in sys.path:
    sys.path.insert(0, str(ROOT))

from src.protocols.specs import UnknownStateSpec  # noqa: E402


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def epr_spec():
    """ζ = 0.6|01⟩ + 0.8|10⟩"""
    return UnknownStateSpec.epr_form(0.6, 0.8)


@pytest.fixture
def output_dir(tmp_path, monkeypatch):
    """把 CLI 的默认输出目录指向临时目录"""
    from src.core.settings import settings
    monkeypatch.setattr(settings, "output_dir", tmp_path)
    return tmp_path
