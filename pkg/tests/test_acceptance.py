"""Acceptance criteria, one test per criterion.

Each test emits a single PASS/FAIL line; sample counts and tolerances are
pinned to the advertised values.  The suites draw all randomness from the
fixed seed, so these runs are reproducible verbatim.
"""

import json
import random
import subprocess
import sys

from gmpy2 import mpq

from normforge.suites import (SuiteConfig, base_spaces, frame_for, run_suite)


def _run(name, samples, **kw):
    rep = run_suite(name, SuiteConfig(seed=42, samples=samples, **kw))
    return rep


def _report(num, label, ok):
    print("ACCEPTANCE %2d %-24s %s" % (num, label, "PASS" if ok else "FAIL"))
    assert ok, "criterion %d (%s) failed" % (num, label)


def test_criterion_01_embedding_sandwich():
    rep = _run("embedding-sandwich", 1600)  # 200 random vectors per level
    _report(1, "embedding-sandwich", rep.passed)


def test_criterion_02_operators():
    from normforge.embedding import verify_u_isometry
    cfg = SuiteConfig()
    ok = True
    for name, X in base_spaces(cfg)[:2]:
        frame = frame_for(cfg, name, X)
        rng = random.Random(42)
        for _ in range(200):
            f = [mpq(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(frame.D)]
            if frame.t_norm(f).square > frame.f_norm(f) ** 2:
                ok = False
            x = [mpq(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(X.dim)]
            tu = frame.operator_T(frame.operator_U(x))
            if tu != [mpq(4, 3) * frame.tu_scale() * c for c in x]:
                ok = False
            good, _ = verify_u_isometry(frame, x)
            if not good:
                ok = False
    _report(2, "operators T and U", ok)


def test_criterion_03_furth_lemmas():
    ok = all(_run(n, 800).passed for n in ("furthlemma", "furthI", "furthII"))
    _report(3, "truncation lemmas", ok)


def test_criterion_04_beta_alpha():
    ok = _run("betabound", 500).passed and _run("alphabound", 500).passed
    _report(4, "beta and alpha bounds", ok)


def test_criterion_05_rho():
    rep = _run("rho", 1000)
    _report(5, "rho properties", rep.passed)


def test_criterion_06_tree_fidelity():
    ok = _run("tree-monotone", 500).passed and _run("tree-equivalence", 200).passed
    _report(6, "tree-space fidelity", ok)


def test_criterion_07_level_gain():
    rep = _run("b001", 200)
    _report(7, "level-gain inequality", rep.passed)


def test_criterion_08_interpolation():
    from normforge.interpolation import scale_ratio_sq
    from normforge.suites import _interp_specs
    cfg = SuiteConfig()
    ok = _run("interp-scale", 200).passed and _run("interp-contraction", 500).passed
    # ratio variance zero across 50 vector pairs on a tree-built spec
    _name, spec, tree = _interp_specs(cfg)[1]
    pos = [tree.index[p] for p in (("a",), ("a", "b"))]
    rng = random.Random(42)
    ratios = set()
    for _ in range(50):
        x = [mpq(rng.randint(-9, 9), rng.randint(1, 7)) for _ in range(spec.X.dim)]
        if all(x[i] == 0 for i in pos):
            continue
        ratios.add(scale_ratio_sq(spec, pos, x))
    ok = ok and len(ratios) == 1
    _report(8, "interpolation scale law", ok)


def test_criterion_09_segments():
    rep = _run("segments", 1000)  # 500 non-flat pairs per norm and frame
    _report(9, "segment lemmas", rep.passed)


def test_criterion_10_determinism():
    cmd = [sys.executable, "-m", "normforge.cli", "verify", "all",
           "--json", "--seed", "42", "--samples", "200"]
    a = subprocess.run(cmd, capture_output=True, text=True, timeout=1800)
    b = subprocess.run(cmd, capture_output=True, text=True, timeout=1800)
    ok = a.returncode == 0 and b.returncode == 0 and a.stdout == b.stdout \
        and len(a.stdout) > 1000
    _report(10, "byte-stable reports", ok)
