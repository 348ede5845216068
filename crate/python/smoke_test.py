#!/usr/bin/env python3
"""Smoke test for the fermipair_py extension module.

Build the cdylib first, then run this script with the same interpreter you
want the module loaded into:

    cargo build -p fermipair-py
    python3 python/smoke_test.py [--lib target/debug/libfermipair_py.so]

The script copies the library into a temporary directory under the
importable name fermipair_py.so and exercises every exported entry point.
"""

import argparse
import importlib
import math
import pathlib
import shutil
import sys
import tempfile

REPO_ROOT = pathlib.Path(__file__).resolve().parent.parent
DEFAULT_LIB = REPO_ROOT / "target" / "debug" / "libfermipair_py.so"


def import_module(lib_path: pathlib.Path, scratch: pathlib.Path):
    if not lib_path.exists():
        sys.exit(f"cdylib not found at {lib_path}; run `cargo build -p fermipair-py`")
    shutil.copy(lib_path, scratch / "fermipair_py.so")
    sys.path.insert(0, str(scratch))
    return importlib.import_module("fermipair_py")


def check(label: str, ok: bool, detail: str = ""):
    if not ok:
        sys.exit(f"FAIL {label} {detail}")
    print(f"ok {label}")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--lib", type=pathlib.Path, default=DEFAULT_LIB)
    args = parser.parse_args()

    with tempfile.TemporaryDirectory() as scratch:
        fp = import_module(args.lib, pathlib.Path(scratch))

        check("version", isinstance(fp.__version__, str) and fp.__version__)

        check("gamma half", abs(fp.gamma(0.5) - math.sqrt(math.pi)) < 1e-12)
        check("gamma factorial", abs(fp.gamma(6.0) - 120.0) < 1e-10)

        check("trap function anchor u=1", abs(fp.trap_function(1.0, 1.0) + 2.0) < 1e-8)
        check("trap function anchor u=2", abs(fp.trap_function(2.0, 1.0) + 4.0) < 1e-8)
        x = 0.37
        check(
            "spherical closed form",
            abs(fp.trap_function(-x, 1.0) - fp.spherical_closed_form(x)) < 1e-8,
        )

        params = fp.TrapParams(1.0, 0.0, 0.0)
        check("params attrs", params.aspect_ratio == 1.0 and params.inv_as == 0.0)
        check("broad resonance flag", params.within_broad_resonance_limit())
        x1, beta2 = fp.solve_branch_point(1, params)
        check("unitarity energy", abs(x1 - 0.5) < 1e-6, f"x={x1}")
        check("zero-range molecular fraction", beta2 == 0.0)

        narrow = fp.TrapParams(5 / 6, 0.0, 0.04)
        rows = fp.trace_branch(1, narrow, [-2.0, 0.0, 2.0])
        xs = [row[1] for row in rows]
        check("trace ordering", xs[0] < xs[1] < xs[2], f"xs={xs}")
        check("trace fraction bound", all(0.0 < row[2] < 0.01 for row in rows))

        weights = fp.schmidt_weights(1, narrow, 8)
        check("schmidt normalization", abs(sum(weights) - 1.0) < 1e-8)
        check("schmidt descending", all(a >= b for a, b in zip(weights, weights[1:])))
        spatial, total = fp.entanglement_entropy(1, narrow, 8)
        check("spin contribution", abs(total - spatial - math.log(2.0)) < 1e-12)

        report = fp.converge_entropy(1, narrow, [4, 8], 0.05)
        check("ramp entries", [k for k, _ in report.entropies] == [4, 8])
        check("ramp best", report.best() > 0.0, repr(report))
        check("ramp last K", report.last_k() == 8)

        check("axial cap isotropic", fp.axial_cap(20, 1.0) == 20)
        check("axial cap cigar", fp.axial_cap(20, 5 / 6) == 24)

        check("toy decoupled", fp.toy_entropy(0.0) == 0.0)
        sat = fp.toy_saturation_entropy()
        check("toy saturation", abs(fp.toy_entropy(1e4) - sat) < 1e-3)

        try:
            fp.TrapParams(-1.0, 0.0, 0.0)
        except ValueError:
            check("invalid params raise", True)
        else:
            check("invalid params raise", False)

    print("smoke test passed")


if __name__ == "__main__":
    main()
