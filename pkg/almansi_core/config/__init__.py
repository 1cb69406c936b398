"""
Configuration for almansi-core verification suites
"""

from .settings import (
    CorpusSettings, ToleranceSettings, MonteCarloSettings, SuiteSettings, load_settings,
    DEFAULT_CONFIG_PATH,
)

__all__ = [
    'CorpusSettings', 'ToleranceSettings', 'MonteCarloSettings', 'SuiteSettings', 'load_settings',
    'DEFAULT_CONFIG_PATH',
]
