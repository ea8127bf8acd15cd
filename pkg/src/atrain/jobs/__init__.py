"""Job records, persistence, the pipeline and its HTTP face."""

from .api import create_app
from .manager import JobManager
from .offline import NetworkAttempt, OfflineGuard
from .pipeline import PipelineRunner, compute_rpt
from .records import (
    SPEAKERS_AUTO,
    SPEAKERS_OFF,
    STATE_ORDER,
    TERMINAL_STATES,
    JobConfig,
    JobRecord,
    JobState,
    expected_states,
)
from .store import JobStore

__all__ = [
    "JobConfig",
    "JobManager",
    "JobRecord",
    "JobState",
    "JobStore",
    "NetworkAttempt",
    "OfflineGuard",
    "PipelineRunner",
    "SPEAKERS_AUTO",
    "SPEAKERS_OFF",
    "STATE_ORDER",
    "TERMINAL_STATES",
    "compute_rpt",
    "create_app",
    "expected_states",
]
