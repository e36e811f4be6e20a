from .tasks import (
    TASK_NAMES,
    CableGeometry,
    ContactParams,
    PegGeometry,
    PegShape,
    PerceptionNoiseModel,
    ShapeSymmetry,
    Side,
    TaskDefaults,
    TaskKind,
    TaskSpec,
    load_task_config,
    task_spec,
)
from .world import (
    GripperOccupied,
    InvalidArgument,
    NoSuchObject,
    NoSuchPose,
    SimError,
    World,
    check_success,
    spawn_task,
)
