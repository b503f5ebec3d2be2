"""2D simulator and mechanics toolkit for pneumatic tip-everting growing robots.

The package models a soft growing robot (a pressurized everting tube) carrying
a motorized tip mount: closed-form wall/payload mechanics, attachment state
machines for five tip mount designs, a deterministic kinematic simulator with
grasping, a joystick-style open-loop controller, scenario/log file formats,
and a CLI plus a streaming teleoperation service.
"""

from .model import (
    AttachmentState,
    AttachmentStatus,
    Material,
    Mode,
    PayloadEnvelope,
    PayloadFactor,
    Pose,
    RobotState,
    Segment,
    TipMountDesign,
    TipMountSpec,
)

__version__ = "0.1.0"

__all__ = [
    "AttachmentState",
    "AttachmentStatus",
    "Material",
    "Mode",
    "PayloadEnvelope",
    "PayloadFactor",
    "Pose",
    "RobotState",
    "Segment",
    "TipMountDesign",
    "TipMountSpec",
    "__version__",
]
