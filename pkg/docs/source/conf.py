# Sphinx 配置：GHZ-Protocols API 文档
#
# 构建: sphinx-build -b html docs/source docs/build
# autodoc 直接导入 src 包，numpy 与 PyYAML 需要已安装；日志与 .env 相关依赖以 mock 代替。

import os
import sys

# -- 项目信息 -----------------------------------------------------------------
project = 'GHZ-Protocols'
copyright = '2026, GHZ-Protocols contributors'
author = 'GHZ-Protocols contributors'
release = '0.1'

# 项目根目录加入 sys.path，autodoc 才能导入 src.core / src.protocols
sys.path.insert(0, os.path.abspath('../../'))

# -- 通用配置 -----------------------------------------------------------------
autodoc_mock_imports = ["colorlog", "dotenv"]
autodoc_member_order = 'bysource'
autodoc_typehints = 'description'

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.napoleon',     # docstring 中的 :param: / :return: 字段
    'sphinx.ext.viewcode',
    'sphinx.ext.mathjax',      # 态与算符公式
]

templates_path = ['_templates']
exclude_patterns = []

language = 'zh_CN'

# -- HTML 输出 ----------------------------------------------------------------
html_theme = 'sphinx_rtd_theme'
html_title = 'GHZ-Protocols：GHZ 信道量子通信协议模拟器'
html_static_path = ['_static']
