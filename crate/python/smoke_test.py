#!/usr/bin/env python3
"""Smoke test for the conequant_py extension module.

Builds nothing itself: run `cargo build -p conequant-py` (or --release)
first; the script locates the cdylib in target/ and imports it.
"""

import math
import pathlib
import shutil
import sys
import tempfile

ROOT = pathlib.Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        ROOT / "target" / profile / ("libconequant_py" + ext)
        for profile in ("release", "debug")
        for ext in (".so", ".dylib")
    ]
    lib = next((c for c in candidates if c.exists()), None)
    if lib is None:
        sys.exit("cdylib not found; run `cargo build -p conequant-py` first")
    tmp = tempfile.mkdtemp(prefix="conequant_py_")
    shutil.copy(lib, pathlib.Path(tmp) / "conequant_py.so")
    sys.path.insert(0, tmp)
    import conequant_py

    return conequant_py


def main():
    cq = load_module()

    # DSL round trip and canonical commutation relation.
    assert cq.eval_operator("[d1, z1]", 4) == "1"
    assert cq.eval_operator("z1*d1 + 1/2 + i*z2", 4) == "z1*d1 + i*z2 + 1/2"

    # Weight decomposition: z1*d2^2 has weight -1, d1 has weight -1 too.
    parts = cq.bigrade("z1*d2^2 + d1", 4)
    assert len(parts) == 1 and parts[0][1] == -1, parts

    # Rotations descend to the cone; a bare derivative does not.
    assert cq.restrictable("z1*d2 - z2*d1", 4)
    assert not cq.restrictable("d1", 4)

    # Hydrogen levels -1/(4n^2).
    levels = cq.bound_states(1.0, 0, 80, 1.0)
    for n, lam in enumerate(levels[:3], start=1):
        expected = -1.0 / (4 * n * n)
        assert abs(lam - expected) / abs(expected) < 1e-8, (n, lam)

    # Monodromy is trivial exactly on the candidate set.
    i_re, i_im, m_re, m_im, abs_m = cq.monodromy(-0.25)
    assert abs(i_re - 4 * math.pi) < 1e-10 and abs(i_im) < 1e-12
    assert abs(m_re - 1.0) < 1e-10 and abs(m_im) < 1e-10
    _, _, _, _, abs_m = cq.monodromy(0.0, 1.0)
    assert abs(abs_m - 1.0) > 0.1

    assert cq.classify(-0.25) == "elliptic, nu=0.5"
    assert cq.classify(0.0) == "nilpotent"

    cands = cq.candidate_spectrum(1.0, 4)
    assert cands == [-1.0, -0.25, -1.0 / 9.0, -0.0625]

    print("smoke test passed")


if __name__ == "__main__":
    main()
