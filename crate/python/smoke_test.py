#!/usr/bin/env python3
"""Smoke test for the sepsys_py extension module.

Builds the cdylib if needed, imports it, and runs the whole pipeline on a
bundled instance: load, enumerate profiles, build a tree of tangles,
verify it, and round-trip the result through JSON.
"""

import json
import shutil
import subprocess
import sys
import tempfile
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def find_cdylib():
    target = ROOT / "target"
    names = ("libsepsys_py.so", "libsepsys_py.dylib")
    hits = [p for profile in ("debug", "release") for n in names if (p := target / profile / n).is_file()]
    return max(hits, key=lambda p: p.stat().st_mtime) if hits else None


def import_module():
    lib = find_cdylib()
    if lib is None:
        subprocess.run(["cargo", "build", "-p", "sepsys-py"], cwd=ROOT, check=True)
        lib = find_cdylib()
        assert lib is not None, "cargo build produced no cdylib"
    moddir = Path(tempfile.mkdtemp(prefix="sepsys_py_"))
    shutil.copy(lib, moddir / "sepsys_py.so")
    sys.path.insert(0, str(moddir))
    import sepsys_py

    return sepsys_py


def main():
    sepsys_py = import_module()
    text = (ROOT / "fixtures" / "inst-2tri.json").read_text()

    u = sepsys_py.Universe.from_json(text)
    assert len(u) == 193 and u.max_order() == 6, (len(u), u.max_order())
    assert u.inv(u.inv(0)) == 0
    assert u.leq(u.meet(0, 5), 0) and u.leq(0, u.join(0, 5))
    assert not u.is_regular  # graph universes always contain small elements

    profiles = u.regular_robust_profiles(u.max_order())
    assert profiles, "expected profiles on a connected graph"
    assert all(u.is_regular_profile(p) and u.is_robust(p) for p in profiles)

    tot = u.tree_of_tangles()
    assert sorted(p.ids for p in tot.profiles) == sorted(p.ids for p in profiles)
    assert {u.inv(s) for s in tot.tree} == set(tot.tree), "tree not closed under inversion"
    assert len(tot.certificates) == len(tot.tree) // 2

    report = u.verify(tot)
    assert report.passed and not report.violations, str(report)
    assert "all checks passed" in str(report)

    # serialization round trip, and a second build must agree byte for byte
    back = sepsys_py.TreeOfTangles.from_json(tot.to_json())
    assert u.verify(back).passed
    assert u.tree_of_tangles().to_json() == tot.to_json()
    json.loads(tot.to_json())  # well-formed

    dot = u.to_dot(tot.tree)
    assert dot.startswith("graph tree {") and dot.count("label=") == len(tot.tree) // 2

    # a deliberately broken tree must be caught, not accepted (decode closes
    # the tree under inversion, so drop a whole pair, not just an orientation)
    mangled = json.loads(tot.to_json())
    mangled["tree"] = mangled["tree"][:1]
    bad = u.verify_json(json.dumps(mangled))
    assert not bad.passed and bad.violations

    try:
        u.label(10_000)
        raise AssertionError("out-of-range id accepted")
    except ValueError:
        pass

    print(f"smoke test ok: {u!r}, {tot!r}")


if __name__ == "__main__":
    main()
