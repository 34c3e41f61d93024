"""fractree: parametric Pythagorean-style fractal tree engine.

Generates, audits, renders and exports generalized Pythagorean trees
T(e, b, angle, v) with da Vinci-rule control and the golden-ratio
branch family.
"""

from .backend import backend_name
from .branching import (
    DEFAULT_DEPTH_CAP,
    GOLDEN_RATIO,
    BranchTransforms,
    TreeParams,
    davinci_factor,
    derive_transforms,
    golden_scales,
)
from .errors import (
    DepthCapError,
    FormatError,
    FractreeError,
    StructuralError,
    ValidationError,
)
from .generator import (
    GENERATOR_VERSION,
    GrowSummary,
    TreeGeometry,
    child_quads,
    grow,
    grow_streaming,
)
from .geometry import Quad, base_quad, rotate_about, scale_about, translate
from .seeding import derive_seed, flip_decision

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_DEPTH_CAP",
    "GENERATOR_VERSION",
    "GOLDEN_RATIO",
    "BranchTransforms",
    "DepthCapError",
    "FormatError",
    "FractreeError",
    "GrowSummary",
    "Quad",
    "StructuralError",
    "TreeGeometry",
    "TreeParams",
    "ValidationError",
    "backend_name",
    "base_quad",
    "child_quads",
    "davinci_factor",
    "derive_seed",
    "derive_transforms",
    "flip_decision",
    "golden_scales",
    "grow",
    "grow_streaming",
    "rotate_about",
    "scale_about",
    "translate",
]
