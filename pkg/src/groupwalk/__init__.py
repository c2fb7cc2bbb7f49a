"""Online pedestrian group-walking event detection.

Tracks are Kalman-filtered bounding boxes; each frame the tracks are linked
by a motion similarity graph, clustered spectrally, and a group event is
raised whenever a cluster holds three or more people.
"""

from .errors import AlignmentError, FormatError, GroupWalkError, NumericError
from .events import GroupEvent, detect_group_event
from .evaluation import ami, contingency, sequence_score
from .kernels import BACKEND
from .pipeline import Engine, EvalReport, FrameResult, RunConfig, evaluate, run, sweep
from .similarity import (
    SimilarityGraph,
    SimilarityParams,
    build_graph,
    gaussian_kl,
    scale_factor,
    similarity,
    symmetric_kl,
)
from .spectral import (
    FrameClustering,
    Spectrum,
    eig_sym,
    eigengap_select,
    kmeans,
    laplacian,
    spectral_cluster,
)
from .synth import ScenarioSpec, generate
from .tracking import Detection, KalmanConfig, TrackState, init_track, predict, step_frame, update

__version__ = "0.1.0"
