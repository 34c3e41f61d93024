"""Branch-transform math: from user-facing tree parameters to the fixed
scaling/rotation constants consumed by the recursive generator.

Conventions used throughout the package:

* ``branching_angle`` is the user-facing angle between the two child
  branches, in radians.  The branching triangle's apex angle (opposite
  the parent's top edge) is ``pi - branching_angle``; the cosine-rule
  formulas below are evaluated with the apex angle.
* ``s_l``/``s_r`` are the raw cosine-rule scales of the larger/smaller
  child.  The da Vinci factor ``f`` multiplies both so that
  ``(f*s_l)**2 + (f*s_r)**2 == v``; with ``v=1`` the children's summed
  squared widths equal the parent's (the da Vinci rule).
* Rotation matrices are stored in the row-vector convention
  ``p' = p @ rot``; ``rot_l`` applied as-is rotates counterclockwise by
  ``gamma``, ``rot_r`` transposed rotates clockwise by ``beta``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

#: The golden ratio g = (1 + sqrt(5)) / 2.  Satisfies g**2 == g + 1.
GOLDEN_RATIO: float = (1.0 + math.sqrt(5.0)) / 2.0

#: Hard cap on recursion depth (2**29 - 1 quads at depth 28).
DEFAULT_DEPTH_CAP: int = 28


def _require_finite(name: str, value: float) -> float:
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{name} must be finite, got {value!r}")
    return value


@dataclass(frozen=True)
class TreeParams:
    """The tree family parameters: elongation, imbalance, branching angle,
    da Vinci factor, plus growth depth, seed and the golden-mode flag.

    ``b < 1`` is normalized to ``1/b`` on construction so the "left" child
    is always the larger one before random flips.  ``golden_mode=True``
    forces ``b`` to the golden ratio and replaces the cosine-rule scales
    and rotation angles with the golden-ratio-constrained ones.
    """

    e: float
    b: float = 1.0
    branching_angle: float = math.pi / 2
    v: float = 1.0
    depth: int = 0
    seed: int = 0
    golden_mode: bool = False
    flip_prob: float = 0.5

    def __post_init__(self) -> None:
        e = _require_finite("e", self.e)
        if e <= 0:
            raise ValidationError(f"e must be > 0, got {e}")
        object.__setattr__(self, "e", e)

        b = _require_finite("b", self.b)
        if self.golden_mode:
            b = GOLDEN_RATIO
        else:
            if b <= 0:
                raise ValidationError(f"b must be > 0, got {b}")
            if b < 1.0:
                b = 1.0 / b
        object.__setattr__(self, "b", b)

        angle = _require_finite("branching_angle", self.branching_angle)
        if not 0.0 < angle < math.pi:
            raise ValidationError(
                f"branching_angle must be in (0, pi), got {angle}"
            )
        object.__setattr__(self, "branching_angle", angle)

        v = _require_finite("v", self.v)
        if v <= 0:
            raise ValidationError(f"v must be > 0, got {v}")
        object.__setattr__(self, "v", v)

        depth = int(self.depth)
        if depth < 0:
            raise ValidationError(f"depth must be >= 0, got {depth}")
        object.__setattr__(self, "depth", depth)

        seed = int(self.seed)
        if not 0 <= seed < 2**64:
            raise ValidationError("seed must be an unsigned 64-bit integer")
        object.__setattr__(self, "seed", seed)

        flip_prob = _require_finite("flip_prob", self.flip_prob)
        if not 0.0 <= flip_prob <= 1.0:
            raise ValidationError(f"flip_prob must be in [0, 1], got {flip_prob}")
        object.__setattr__(self, "flip_prob", flip_prob)

    @property
    def branching_angle_deg(self) -> float:
        return math.degrees(self.branching_angle)


@dataclass(frozen=True)
class BranchTransforms:
    """Derived per-junction constants.

    ``s_l``/``s_r`` are the raw (pre-normalization) scales; the effective
    scales applied by the generator are ``f*s_l`` and ``f*s_r``.
    """

    s_l: float
    s_r: float
    f: float
    gamma: float
    beta: float
    rot_l: np.ndarray = field(repr=False)
    rot_r: np.ndarray = field(repr=False)

    @property
    def effective_s_l(self) -> float:
        """Scale of the larger child after da Vinci renormalization."""
        return self.f * self.s_l

    @property
    def effective_s_r(self) -> float:
        """Scale of the smaller child after da Vinci renormalization."""
        return self.f * self.s_r


def rotation_rowmat(angle: float) -> np.ndarray:
    """Rotation matrix ``[[cos, sin], [-sin, cos]]`` for the row-vector
    convention ``p' = p @ rot`` (counterclockwise for positive angle)."""
    c, s = math.cos(angle), math.sin(angle)
    return np.array([[c, s], [-s, c]], dtype=np.float64)


def davinci_factor(s_l: float, s_r: float, v: float) -> float:
    """Renormalization factor so children-to-parent squared-width ratio is v.

    Defined by the invariant ``(f*s_l)**2 + (f*s_r)**2 == v``, i.e.
    ``f = sqrt(v / (s_l**2 + s_r**2))``.
    """
    if s_l <= 0 or s_r <= 0:
        raise ValidationError("scales must be positive")
    if v <= 0:
        raise ValidationError("v must be > 0")
    return math.sqrt(v / (s_l * s_l + s_r * s_r))


def golden_scales() -> tuple[float, float]:
    """Child scales when both the da Vinci rule and the golden imbalance
    hold: ``s_r = 1/sqrt(g**2 + 1)``, ``s_l = g*s_r``.

    Independent of the branching angle; ``s_l**2 + s_r**2 == 1``.
    """
    g = GOLDEN_RATIO
    s_r = 1.0 / math.sqrt(g * g + 1.0)
    return g * s_r, s_r


def derive_transforms(params: TreeParams) -> BranchTransforms:
    """Evaluate the cosine-rule scales and rotation angles for ``params``.

    The apex angle ``pi - branching_angle`` enters the cosine rule:

        s_r = 1 / sqrt(1 + b**2 - 2*b*cos(apex)),   s_l = b * s_r
        gamma = arccos((s_l**2 - s_r**2 + 1) / (2*s_l))
        beta  = branching_angle - gamma

    In golden mode the scales come from :func:`golden_scales` and the
    rotations are locked to the golden ratio:
    ``gamma = branching_angle / g**2``, ``beta = branching_angle / g``.

    Raises :class:`ValidationError` on degenerate triangles.
    """
    angle = params.branching_angle

    if params.golden_mode:
        g = GOLDEN_RATIO
        s_l, s_r = golden_scales()
        gamma = angle / (g * g)
        beta = angle / g
    else:
        b = params.b
        apex = math.pi - angle
        sq = 1.0 + b * b - 2.0 * b * math.cos(apex)
        if sq <= 0.0:
            raise ValidationError(
                f"degenerate branching triangle (b={b}, angle={angle})"
            )
        s_r = 1.0 / math.sqrt(sq)
        s_l = b * s_r
        cos_gamma = (s_l * s_l - s_r * s_r + 1.0) / (2.0 * s_l)
        if not -1.0 - 1e-12 <= cos_gamma <= 1.0 + 1e-12:
            raise ValidationError(
                f"branching triangle does not close (cos gamma={cos_gamma})"
            )
        gamma = math.acos(min(1.0, max(-1.0, cos_gamma)))
        beta = angle - gamma

    f = davinci_factor(s_l, s_r, params.v)
    return BranchTransforms(
        s_l=s_l,
        s_r=s_r,
        f=f,
        gamma=gamma,
        beta=beta,
        rot_l=rotation_rowmat(gamma),
        rot_r=rotation_rowmat(beta),
    )
