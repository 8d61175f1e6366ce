"""Per-frame hazard indicators for human-robot collaboration scenes.

Quantifies, for every time-stamped scene frame, how dangerous a
human-robot collaboration scenario currently is, via three bounded
indicators — separation distance, tool velocity (speed and direction),
and operator head orientation — and their weighted aggregate.
"""

from .errors import (
    ConfigError,
    DimensionMismatch,
    EmptyGeometry,
    EmptyScenario,
    HazardError,
    InvalidCalibration,
    NonFiniteValue,
    NonMonotoneTimestamp,
    NonUnitGaze,
    ZeroTimeDelta,
)
from .geometry import (
    Capsule,
    ProximityResult,
    min_human_robot_distance,
    segment_segment_distance,
    worst_case_direction,
)
from .hazard import (
    HazardConfig,
    calibrate_alpha,
    d_min_from_stop_time,
    directional_hazard,
    distance_hazard,
    load_hazard_config,
    phh_angle,
    phh_hazard,
    resolve_hazard_config,
    total_hazard,
    velocity_hazard,
    velocity_magnitude_hazard,
)
from .kinematics import (
    RobotModel,
    RobotPose,
    bundled_robot_path,
    cartesian_velocity,
    forward_kinematics,
    jacobian,
    load_robot_model,
)
from .pipeline import (
    FrameHazard,
    ScenarioReport,
    analyze_scenario,
    compare_scenarios,
    evaluate_frame,
)
from .scene import (
    DEFAULT_SEGMENTS,
    HeadPose,
    HumanSkeleton,
    RobotJointState,
    SceneFrame,
    frame_from_dict,
    load_scenario,
    validate_frame,
)
from .simulator import ScenarioSpec, generate

__version__ = "0.1.0"
