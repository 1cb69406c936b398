"""
Performance monitoring utilities for almansi-core
"""

from .performance import CheckTimer, PerformanceMonitor, performance_monitor, timed_operation

__all__ = [
    'CheckTimer', 'PerformanceMonitor', 'performance_monitor', 'timed_operation'
]
