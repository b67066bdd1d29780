"""spatialui: engine-agnostic spatial GUI toolkit with a deterministic core."""

from .config import Config, load_config
from .errors import (
    FormatError,
    InvalidArgumentError,
    InvalidStateError,
    NotFoundError,
    NotGrabbableError,
    OutOfDomainError,
    ProtocolError,
    SpatialUIError,
    TruncatedFileError,
    UnsupportedFormatError,
    UnsupportedVersionError,
)
from .events import Event, EventKind
from .geo import (
    ChargerQuery,
    ChargerRecord,
    ChargerType,
    MapPlaneSpec,
    PointCloud,
    load_chargers,
    load_point_cloud,
    mercator_project,
    mercator_unproject,
    query_chargers,
)
from .inputs import (
    DeviceKind,
    DeviceSample,
    EngageKind,
    InputFrame,
    InteractionState,
    pointer_ray,
    process_frame,
)
from .layout import (
    ContextRule,
    GrabSession,
    LayoutDocument,
    SnapPolicy,
    begin_grab,
    end_grab,
    load_layout,
    rules_from_json,
    save_layout,
    set_context,
    update_grab,
)
from .math3d import (
    Obb,
    Pose,
    Quat,
    Ray,
    Vec3,
    compose,
    inverse,
    point_obb_distance,
    ray_intersect_obb,
)
from .runtime import (
    ReplayScript,
    SceneSnapshot,
    SnapshotNode,
    World,
    attach_scan,
    build_demo_world,
    parse_script,
    run_replay,
    snapshot,
    tick,
)
from .scene import NodeKind, Scene, SceneNode, pick
from .springs import SpringParams, SpringState, default_button_spring, is_settled, spring_step
from .widgets import (
    Button3D,
    Panel,
    Slider3D,
    button_update,
    panel_slot_pose,
    set_opacity,
    slider_update,
)

__version__ = "0.1.0"
