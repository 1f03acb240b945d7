"""Load the compiled extension and exercise each binding once.

Build first with `cargo build --release -p quartic-census-py`; the script
looks for the shared library under target/release or target/debug.
"""

import importlib.machinery
import importlib.util
import math
import pathlib
import sys

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load():
    for profile in ("release", "debug"):
        lib = ROOT / "target" / profile / "libquartic_census_py.so"
        if lib.exists():
            loader = importlib.machinery.ExtensionFileLoader("quartic_census_py", str(lib))
            spec = importlib.util.spec_from_file_location("quartic_census_py", lib, loader=loader)
            mod = importlib.util.module_from_spec(spec)
            loader.exec_module(mod)
            return mod
    sys.exit("extension not built: run cargo build -p quartic-census-py")


def main():
    qc = load()
    info = qc.classify([1, 0, 0, 0, -2])
    assert info["galois"] == "d4" and info["r2"] == 1, info
    assert info["conductor"] == -256 and info["maximal"], info
    assert qc.classify([1, 0, 0, 0, 1])["galois"] == "v4"
    try:
        qc.classify([0, 0, 0, 0, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("zero discriminant accepted")

    assert qc.is_maximal(1, 1, 0, -2)
    assert not qc.is_maximal(1, 4, 0, 1)
    assert qc.conductor(1, 1, 0, -2) == -256

    assert qc.density("rho2", 3, a=1) == 15
    assert qc.density("rho_v4", 2) == 10

    counts = qc.census_conductor(10**5, shards=2)
    assert counts == qc.census_conductor(10**5), counts
    assert sum(counts) > 0
    assert qc.census_discriminant(10**4, "v4") == qc.census_discriminant(10**4, galois="v4")

    assert abs(qc.carefree_product(10**5) - 0.42825) < 1e-4
    t = qc.leading_term(1e6)
    parts = sum(qc.leading_term(1e6, r2=r) for r in range(3))
    assert math.isclose(t, parts, rel_tol=1e-12), (t, parts)

    print(f"quartic_census_py {qc.__version__}: ok (D4 by conductor < 1e5: {counts})")


if __name__ == "__main__":
    main()
