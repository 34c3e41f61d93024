"""Geometry serialization: a flat binary format and a JSON-lines debug
format.  Both round-trip losslessly.

Binary layout (little-endian):

    magic    4s   b"FTRE"
    version  u16  format version (currently 1)
    reserved u16  zero
    e, b, branching_angle (radians), v, flip_prob    5 x f64
    depth    u32
    flags    u32  bit 0 = golden_mode
    seed     u64
    gv_len   u16  length of the generator version string
    gv       gv_len bytes, utf-8
    count    u64  number of quads
    records  count x (8 x f64 vertex coords v1..v4, u16 depth)

The JSONL format is one header object (format name, version, params,
count) followed by one object per quad; float values round-trip through
repr exactly.
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from .branching import TreeParams, derive_transforms
from .errors import FormatError
from .generator import GENERATOR_VERSION, TreeGeometry

MAGIC = b"FTRE"
FORMAT_VERSION = 1

_HEADER = struct.Struct("<4sHHdddddIIQH")
_QUAD_DTYPE = np.dtype([("xy", "<f8", (4, 2)), ("depth", "<u2")])


def _params_dict(p: TreeParams) -> dict:
    return {
        "e": p.e,
        "b": p.b,
        "branching_angle": p.branching_angle,
        "v": p.v,
        "depth": p.depth,
        "seed": p.seed,
        "golden_mode": p.golden_mode,
        "flip_prob": p.flip_prob,
    }


def _params_from_dict(d: dict) -> TreeParams:
    return TreeParams(**d)


def write_geometry(geometry: TreeGeometry, path: str | Path) -> None:
    """Write the flat binary format."""
    p = geometry.params
    gv = geometry.generator_version.encode("utf-8")
    header = _HEADER.pack(
        MAGIC,
        FORMAT_VERSION,
        0,
        p.e,
        p.b,
        p.branching_angle,
        p.v,
        p.flip_prob,
        p.depth,
        1 if p.golden_mode else 0,
        p.seed,
        len(gv),
    )
    records = np.empty(geometry.n_quads, dtype=_QUAD_DTYPE)
    records["xy"] = geometry.xy
    records["depth"] = geometry.depths
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(gv)
        fh.write(struct.pack("<Q", geometry.n_quads))
        fh.write(records.tobytes())


def read_geometry(path: str | Path) -> TreeGeometry:
    """Read the flat binary format back into a TreeGeometry."""
    with open(path, "rb") as fh:
        raw = fh.read(_HEADER.size)
        if len(raw) < _HEADER.size:
            raise FormatError(f"{path}: truncated header")
        (magic, version, _reserved, e, b, angle, v, flip_prob,
         depth, flags, seed, gv_len) = _HEADER.unpack(raw)
        if magic != MAGIC:
            raise FormatError(f"{path}: bad magic {magic!r}")
        if version != FORMAT_VERSION:
            raise FormatError(f"{path}: unsupported format version {version}")
        gv = fh.read(gv_len)
        if len(gv) < gv_len:
            raise FormatError(f"{path}: truncated version string")
        raw_count = fh.read(8)
        if len(raw_count) < 8:
            raise FormatError(f"{path}: truncated count")
        (count,) = struct.unpack("<Q", raw_count)
        payload = fh.read()
    if len(payload) != count * _QUAD_DTYPE.itemsize:
        raise FormatError(
            f"{path}: payload holds {len(payload)} bytes, "
            f"expected {count * _QUAD_DTYPE.itemsize}"
        )
    records = np.frombuffer(payload, dtype=_QUAD_DTYPE)
    params = TreeParams(
        e=e, b=b, branching_angle=angle, v=v, depth=depth, seed=seed,
        golden_mode=bool(flags & 1), flip_prob=flip_prob,
    )
    return TreeGeometry(
        xy=np.ascontiguousarray(records["xy"], dtype=np.float64),
        depths=np.ascontiguousarray(records["depth"], dtype=np.uint16),
        params=params,
        transforms=derive_transforms(params),
        generator_version=gv.decode("utf-8"),
    )


def write_jsonl(geometry: TreeGeometry, path: str | Path) -> None:
    """Write the JSON-lines debug format."""
    header = {
        "format": "fractree-geometry",
        "version": FORMAT_VERSION,
        "generator_version": geometry.generator_version,
        "params": _params_dict(geometry.params),
        "count": geometry.n_quads,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(header) + "\n")
        for i in range(geometry.n_quads):
            fh.write(
                json.dumps(
                    {"depth": int(geometry.depths[i]), "xy": geometry.xy[i].tolist()}
                )
                + "\n"
            )


def read_jsonl(path: str | Path) -> TreeGeometry:
    """Read the JSON-lines debug format."""
    with open(path, encoding="utf-8") as fh:
        try:
            header = json.loads(fh.readline())
        except json.JSONDecodeError as exc:
            raise FormatError(f"{path}: bad JSONL header: {exc}") from exc
        if header.get("format") != "fractree-geometry":
            raise FormatError(f"{path}: not a fractree geometry file")
        if header.get("version") != FORMAT_VERSION:
            raise FormatError(f"{path}: unsupported version {header.get('version')}")
        count = header["count"]
        xy = np.empty((count, 4, 2), dtype=np.float64)
        depths = np.empty(count, dtype=np.uint16)
        for i in range(count):
            line = fh.readline()
            if not line:
                raise FormatError(f"{path}: expected {count} quads, got {i}")
            rec = json.loads(line)
            xy[i] = rec["xy"]
            depths[i] = rec["depth"]
    params = _params_from_dict(header["params"])
    return TreeGeometry(
        xy=xy,
        depths=depths,
        params=params,
        transforms=derive_transforms(params),
        generator_version=header.get("generator_version", GENERATOR_VERSION),
    )
