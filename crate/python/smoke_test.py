#!/usr/bin/env python3
"""Smoke test for the blockcoh_py extension module.

Builds nothing itself: run `cargo build -p blockcoh-py` (or --release)
first, then `python3 python/smoke_test.py`. The script copies the produced
cdylib next to a temp dir under the importable name and runs a handful of
checks against known values.
"""

import json
import pathlib
import shutil
import sys
import tempfile


def locate_cdylib() -> pathlib.Path:
    root = pathlib.Path(__file__).resolve().parent.parent
    candidates = [
        root / "target" / profile / name
        for profile in ("release", "debug")
        for name in ("libblockcoh_py.so", "blockcoh_py.dll", "libblockcoh_py.dylib")
    ]
    for c in candidates:
        if c.exists():
            return c
    sys.exit("cdylib not found; run `cargo build -p blockcoh-py` first")


def import_module():
    lib = locate_cdylib()
    tmp = tempfile.mkdtemp(prefix="blockcoh_py_")
    suffix = ".so" if lib.suffix in (".so", ".dylib") else ".pyd"
    shutil.copy(lib, pathlib.Path(tmp) / f"blockcoh_py{suffix}")
    sys.path.insert(0, tmp)
    import blockcoh_py

    return blockcoh_py


def main() -> None:
    bc = import_module()
    print(f"loaded blockcoh_py {bc.__version__}")

    # group construction and basic structure
    s3 = bc.Group("S 3")
    assert s3.order() == 6
    assert s3.element_name(0) == "e"
    assert s3.conjugacy_class_count() == 3
    assert s3.sylow_order(3) == 3
    assert s3.splitting_field(3) == (3, 1)
    assert s3.splitting_field(2) == (2, 2)
    ident = s3.mul(1, s3.inv(1))
    assert ident == 0
    print("group structure: ok")

    # cohomology dimensions against known values
    assert bc.cohomology_dims("C 2", 2, 4) == [1, 1, 1, 1, 1]
    assert bc.cohomology_dims("prod(C 2,C 2)", 2, 3) == [1, 2, 3, 4]
    assert bc.cohomology_dims("C 3", 3, 4) == [1, 1, 1, 1, 1]
    print("group cohomology dims: ok")

    # Hochschild dimensions: HH^0 = center
    assert bc.hochschild_dims("S 3", 3, 1) == [3, 1]
    assert bc.hochschild_dims("C 2", 2, 2) == [2, 2, 2]
    print("hochschild dims: ok")

    # block data
    info = bc.block_info("S 3", 3)
    assert "1 block(s)" in info
    assert "dim i kG i = 6" in info
    print("block info: ok")

    # conjecture scan on a known instance
    report = json.loads(bc.scan_json(["S 3"], [3], max_degree=4, suites=["sasaki"]))
    assert report["hard_failures"] == []
    rec = report["records"][0]
    assert rec["defect_order"] == 3
    dims = [d["dim_image"] for d in rec["degrees"]]
    assert dims == [1, 0, 0, 1, 1], dims
    assert all(d["equal"] for d in rec["degrees"])
    print("conjecture scan: ok")

    # a verification suite end to end
    passed, items = bc.verify("mackey", "S 3", 3, hh_degree=1)
    assert passed, items
    passed, items = bc.verify("delta-square", "S 3", 3)
    assert passed, items
    print("verification suites: ok")

    print("smoke test passed")


if __name__ == "__main__":
    main()
