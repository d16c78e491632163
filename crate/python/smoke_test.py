"""Quick check that the compiled extension imports and runs."""

import math

import flavorsim as fs


def main():
    grid = fs.TimeGrid.horizon(10.0, 0.01)
    assert len(grid) == 1001

    seeded = fs.run_seeded(1e-3)
    t = seeded.first_zero_crossing()
    assert abs(t - 0.5 * math.log(1.0 / math.tan(1e-3))) < 1e-3, t

    q = fs.evolve_ladder(64, horizon=6.0)
    assert abs(q.zeta[0] - 1.0) < 1e-12
    assert q.audits, "expected audit channels"

    scan, fit = fs.break_time_scan([16, 64, 256])
    assert fit is not None and fit.r_squared > 0.99, fit

    mf = fs.run_single_mode(512.0, seed=1.0, horizon=10.0)
    assert mf.first_zero_crossing() is not None

    r = fs.analyze_lambda(2.0)
    assert r.classification == "stable"
    assert fs.analyze_lambda(0.5).classification == "unstable"
    rate = fs.growth_rate_empirical(0.0)
    assert abs(rate - 1.0) < 1e-2, rate

    report = fs.feasibility_report()
    assert report["density"]["value"]["value"] > 0

    try:
        fs.evolve_ladder(0)
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    print("flavorsim", fs.__version__, "smoke test ok")


if __name__ == "__main__":
    main()
