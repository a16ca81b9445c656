"""Smoke test for the frsg Python module.

Build and install the extension first:

    pip install --no-build-isolation ./crates/python
    python python/smoke_test.py
"""

import math
import os
import tempfile

import frsg


def check(cond, msg):
    if not cond:
        raise SystemExit(f"FAIL: {msg}")
    print(f"ok: {msg}")


def raises(exc, fn, *args, **kwargs):
    try:
        fn(*args, **kwargs)
    except exc:
        return True
    return False


def main():
    check("smooth2d" in frsg.scenarios(), "scenario registry lists smooth2d")

    sim = frsg.Simulation("smooth2d", alpha=1.5, epsilon=0.5, points=[32, 32])
    u0, _ = sim.fields()
    e0 = sim.energy()
    sim.step(0.01, steps=50)
    check(abs(sim.time - 0.5) < 1e-12 and sim.step_index == 50, "time and step counter advance")
    drift = abs(sim.energy() - e0) / abs(e0)
    check(drift < 1e-3, f"energy drift {drift:.2e} stays small")
    u = sim.u()
    check(u.shape == [32, 32] and len(u.values) == 1024, "field shape and values")
    check(frsg.error_norm(u, u0, 0.75) > 0.0, "solution moved away from the initial data")

    lin = frsg.Simulation("smooth2d", alpha=1.5, epsilon=0.5, points=[16, 16], linear=True)
    n0 = lin.u().sobolev_norm(0.0)
    lin.step(0.1, steps=5)
    check(math.isfinite(lin.u().sobolev_norm(0.0)) and n0 > 0.0, "linear flow runs")

    order = frsg.observed_order(4.5038e-01, 2.5566e-02, 4.0)
    check(abs(order - 2.0694) < 1e-3, f"observed order {order:.4f}")

    with tempfile.TemporaryDirectory() as tmp:
        snap = os.path.join(tmp, "u.frsg")
        frsg.write_snapshot(snap, u, alpha=1.5, epsilon=0.5, time=sim.time)
        back, header = frsg.read_snapshot(snap)
        check(back.values == u.values and header["time"] == sim.time, "snapshot round trip")
        vtk = os.path.join(tmp, "u.vtk")
        frsg.export_vtk(snap, vtk, quantity="sin(u/2)")
        with open(vtk) as f:
            check(f.readline().startswith("# vtk DataFile"), "structured-points export")
        check(raises(OSError, frsg.read_snapshot, os.path.join(tmp, "missing.frsg")), "missing snapshot raises OSError")

        reports = frsg.temporal_sweep(
            "smooth2d", [2.0], [1.0], [0.04, 0.02], horizon="t=0.4", tau_ref=1e-3, n_ref=16,
            cache=os.path.join(tmp, "cache"),
        )
        o = reports[0]["orders"][0][1]
        check(1.7 < o < 2.3, f"temporal sweep order {o:.3f}")

        table = frsg.osc_table(alpha=2.0, depth=2, eps_depth=2, n=16, lambda_ref=0.003125)
        check(len(table["errors"]) == 2 and len(table["errors"][0]) == 2, "oscillatory table shape")

    check(raises(ValueError, frsg.Simulation, "smooth2d", alpha=2.5, epsilon=1.0), "out-of-range alpha raises ValueError")
    print("all smoke checks passed")


if __name__ == "__main__":
    main()
