"""Smoke test for the rcmodel_py extension module.

Builds nothing itself: it expects `cargo build -p rcmodel-py` (or --release)
to have produced the cdylib, copies it next to a temp dir under the name
Python imports, and exercises the bindings against known exact values.

Run from the repository root:

    cargo build -p rcmodel-py
    python3 python/smoke_test.py
"""

import math
import shutil
import sys
import tempfile
from pathlib import Path

REPO = Path(__file__).resolve().parent.parent


def load_module():
    candidates = [
        REPO / "target" / "release" / "librcmodel_py.so",
        REPO / "target" / "debug" / "librcmodel_py.so",
    ]
    built = [c for c in candidates if c.exists()]
    if not built:
        sys.exit("no librcmodel_py.so found; run `cargo build -p rcmodel-py` first")
    newest = max(built, key=lambda c: c.stat().st_mtime)
    stage = Path(tempfile.mkdtemp(prefix="rcmodel_py_"))
    shutil.copy2(newest, stage / "rcmodel_py.so")
    sys.path.insert(0, str(stage))
    import rcmodel_py

    print(f"loaded {newest.relative_to(REPO)} (version {rcmodel_py.__version__})")
    return rcmodel_py


def approx(got, want, tol, label):
    if not math.isfinite(got) or abs(got - want) > tol:
        sys.exit(f"FAIL {label}: got {got!r}, want {want!r} within {tol}")
    print(f"ok {label}: {got:.10g}")


def check(cond, label):
    if not cond:
        sys.exit(f"FAIL {label}")
    print(f"ok {label}")


def main():
    rc = load_module()

    # Duality helpers.
    approx(rc.self_dual_point(1.0), 0.5, 1e-15, "self_dual_point(1)")
    approx(rc.self_dual_point(2.0), math.sqrt(2) / (1 + math.sqrt(2)), 1e-15, "self_dual_point(2)")
    approx(rc.self_dual_point(4.0), 2.0 / 3.0, 1e-15, "self_dual_point(4)")
    p, q = 0.3, 2.0
    approx(rc.dual_parameter(rc.dual_parameter(p, q), q), p, 1e-12, "dual_parameter involution")

    # Region geometry.
    r = rc.Region.centered(1, 1)
    check(r == rc.Region(-1, 1, -1, 1), "centered box equality")
    check(r.n_vertices == 9 and r.n_edges == 12, "3x3 box counts")
    check(len(r.edges()) == 12, "edge list length")
    check(r.contains(0, 0) and not r.contains(2, 0), "containment")
    big = r.margin_box(3)
    check(big.n_edges > r.n_edges, "margin box grows")

    # Events.
    ev = rc.Event.crossing(1, 1)
    check(ev.support() == r, "crossing support box")
    check("Ch" in repr(ev), "crossing repr")
    all_open = [True] * r.n_edges
    no_open = [False] * r.n_edges
    check(ev.detect(r, all_open), "crossing holds when everything is open")
    check(not ev.detect(r, no_open), "crossing fails when everything is closed")

    # Exact enumeration: single edge, p = 1/2, q = 2, free boundary.
    # Weights are (1-p)p^0 q^2 : p q^1 = 2 : 1, so P(open) = 1/3.
    single = rc.Region(0, 1, 0, 0)
    ex = rc.Exact(single, 0.5, 2.0, "free")
    check(ex.n_configs == 2, "single edge has two configurations")
    approx(ex.probability(rc.Event.edge_open(0, 0, "h")), 1.0 / 3.0, 1e-12, "single-edge P(open)")
    approx(ex.edge_marginals()[0], 1.0 / 3.0, 1e-12, "single-edge marginal")

    # q = 1 is a product measure: every marginal equals p, any boundary.
    for bc in ("free", "wired"):
        exq1 = rc.Exact(r, 0.37, 1.0, bc)
        marg = exq1.edge_marginals()
        check(max(abs(mi - 0.37) for mi in marg) < 1e-12, f"q=1 product marginals ({bc})")

    # Influence profile sums match the event and stay nonnegative.
    ex2 = rc.Exact(r, 0.5, 2.0, "wired")
    prob, infl = ex2.influence_profile(ev)
    check(0.0 < prob < 1.0, "crossing probability is nondegenerate")
    check(len(infl) == r.n_edges and min(infl) >= -1e-12,
          "influences are nonnegative up to rounding")

    # Exact distributions at dual parameters agree on the shared region only
    # after swapping boundary, so same-bc distance is strictly positive.
    exw = rc.Exact(r, 0.5, 2.0, "wired")
    exf = rc.Exact(r, 0.5, 2.0, "free")
    check(exw.tv_distance(exf) > 0.0, "wired and free measures differ")

    # Configuration-level utilities.
    check(rc.cluster_count(r, no_open, "free") == 9, "all-closed cluster count, free")
    check(rc.cluster_count(r, no_open, "wired") == 2, "all-closed cluster count, wired")
    check(rc.cluster_count(r, all_open, "free") == 1, "all-open cluster count")
    check(rc.count_disjoint_crossings(r, all_open, 1, 1) == 3, "disjoint crossings of full box")
    check(rc.count_disjoint_crossings(r, no_open, 1, 1) == 0, "disjoint crossings of empty box")

    # Seeded sampling agrees with enumeration and is reproducible.
    est, se, n = rc.estimate_event(r, 0.5, 2.0, "wired", ev, 20_000, 200, 2, 12345)
    exact_p = ex2.probability(ev)
    check(n == 9_900, "sample count follows the schedule")
    check(abs(est - exact_p) < max(5 * se, 0.02), "MC estimate matches enumeration")
    est2, se2, _ = rc.estimate_event(r, 0.5, 2.0, "wired", ev, 20_000, 200, 2, 12345)
    check(est == est2 and se == se2, "same seed reproduces the estimate")
    est3, _, _ = rc.estimate_event(r, 0.5, 2.0, "wired", ev, 20_000, 200, 2, 54321)
    check(est != est3, "different seed moves the estimate")

    # Validation errors surface as ValueError.
    for label, thunk in [
        ("bad bc", lambda: rc.Exact(r, 0.5, 2.0, "periodic")),
        ("bad p", lambda: rc.Exact(r, 1.5, 2.0, "free")),
        ("support too big", lambda: ex.probability(rc.Event.crossing(5, 5))),
        ("wrong open length", lambda: rc.cluster_count(r, [True], "free")),
    ]:
        try:
            thunk()
        except ValueError:
            print(f"ok {label} raises ValueError")
        else:
            sys.exit(f"FAIL {label}: no error raised")

    print("smoke test passed")


if __name__ == "__main__":
    main()
