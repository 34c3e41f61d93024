"""Shared fixtures: datasets produced through the generator's public CLI.

The scorer only ever sees the generator's external interface (the
export-dataset command's directory of PNGs plus labels.csv), never its
Python API.
"""

import subprocess
import sys

import pytest


def export(out_dir, *args):
    cmd = [
        sys.executable, "-m", "fractree.cli", "export-dataset",
        "--out", str(out_dir), *args,
    ]
    proc = subprocess.run(cmd, capture_output=True, text=True)
    if proc.returncode != 0:
        raise RuntimeError(f"dataset export failed:\n{proc.stdout}\n{proc.stderr}")
    return out_dir


@pytest.fixture(scope="session")
def plateau_dir(tmp_path_factory):
    """10 trees from the optimal plateau: T(2..4, 1.5..2, 70deg, 1)."""
    out = tmp_path_factory.mktemp("plateau")
    export(
        out,
        "--e", "2,2.5,3,3.5,4", "--b", "1.5,2", "--angle", "70", "--v", "1",
        "--depth", "9", "--seed", "101",
    )
    return out


@pytest.fixture(scope="session")
def degenerate_dir(tmp_path_factory):
    """10 degenerate trees: squat e=0.1 and stick-like b=10 families."""
    out = tmp_path_factory.mktemp("degenerate")
    export(
        out,
        "--e", "0.1", "--b", "1,1.5,2,5,10", "--angle", "90", "--v", "1",
        "--depth", "9", "--seed", "202",
    )
    # Second family appended into the same directory; labels merge below.
    extra = tmp_path_factory.mktemp("degenerate_b")
    export(
        extra,
        "--e", "1,2,4,5,10", "--b", "10", "--angle", "90", "--v", "1",
        "--depth", "9", "--seed", "203",
    )
    for png in extra.glob("*.png"):
        (out / png.name).write_bytes(png.read_bytes())
    base = (out / "labels.csv").read_text().splitlines()
    more = (extra / "labels.csv").read_text().splitlines()[1:]
    (out / "labels.csv").write_text("\n".join(base + more) + "\n")
    return out
