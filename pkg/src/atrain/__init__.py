"""Offline transcription with speaker labels, run entirely on local hardware."""

__version__ = "0.1.0"

from .align import (
    DEFAULT_GAP_TOLERANCE_S,
    UNKNOWN,
    AlignedSegment,
    AlignedTranscript,
    AlignedWord,
    align_transcript,
    assign_segment_speakers,
    assign_word_speakers,
)
from .config import Settings
from .engines import (
    MockEngineFactory,
    SpeakerTurn,
    TranscriptSegment,
    WordToken,
    speaker_label,
)
from .export import ExportBundle, JobMetadata, format_timestamp, write_bundle
from .jobs import (
    JobConfig,
    JobManager,
    JobRecord,
    JobState,
    OfflineGuard,
    PipelineRunner,
    compute_rpt,
    create_app,
)
from .media import CanonicalAudio, MediaInfo, convert_to_canonical, probe_media
from .models import ModelRegistry, ModelSpec, load_manifest

__all__ = [
    "AlignedSegment",
    "AlignedTranscript",
    "AlignedWord",
    "CanonicalAudio",
    "DEFAULT_GAP_TOLERANCE_S",
    "ExportBundle",
    "JobConfig",
    "JobManager",
    "JobMetadata",
    "JobRecord",
    "JobState",
    "MediaInfo",
    "MockEngineFactory",
    "ModelRegistry",
    "ModelSpec",
    "OfflineGuard",
    "PipelineRunner",
    "Settings",
    "SpeakerTurn",
    "TranscriptSegment",
    "UNKNOWN",
    "WordToken",
    "align_transcript",
    "assign_segment_speakers",
    "assign_word_speakers",
    "compute_rpt",
    "convert_to_canonical",
    "create_app",
    "format_timestamp",
    "load_manifest",
    "probe_media",
    "speaker_label",
    "write_bundle",
    "__version__",
]
