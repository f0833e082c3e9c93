"""Smoke test for the chpeed_py extension module.

Install the module first, either with maturin:

    pip install --no-build-isolation -e crates/python

or by building it next to this script:

    cargo build --release -p chpeed-py --features extension-module
    cp target/release/libchpeed_py.so python/chpeed_py.so

then run:

    python3 python/smoke_test.py
"""

import json
import math

import chpeed_py


def main():
    case = chpeed_py.load_case("case1")
    assert case.unit_counts == (1, 3, 1), case.unit_counts
    assert case.power_demand == [300.0]
    assert case.infeasibility() == []

    point = case.evaluate([105.6], [61.7, 27.8, 104.9], [76.4, 39.5, 0.0053], [34.1])
    assert abs(point["cost"] - 14504.2) < 5.0, point["cost"]
    assert abs(point["emission"] - 7.5) < 0.1, point["emission"]

    result = chpeed_py.solve(case, seed=7, population_size=40, max_iterations=30)
    front = result.front
    assert len(result) == len(front) > 1
    assert all(a[0] <= b[0] and a[1] >= b[1] for a, b in zip(front, front[1:]))
    bcs = result.bcs()
    assert 1 <= len(bcs) <= 2
    assert all(s["feasible"] for s in bcs)
    assert bcs[0]["cost"] <= bcs[-1]["cost"]
    report = json.loads(result.report_json())
    assert len(report["clusters"]) == len(bcs)
    assert result.archive_csv().startswith("cost_usd,emission_kg,")
    assert "BCS 1" in result.report_text()

    again = chpeed_py.solve(case, seed=7, population_size=40, max_iterations=30)
    assert again.archive_csv() == result.archive_csv()

    assert math.isclose(chpeed_py.igd([(0, 0), (1, 1)], [(0, 0)]), math.sqrt(2) / 2)
    assert chpeed_py.spread([(0, 0), (1, 0), (4, 0)], [(0, 0), (4, 0)]) == 0.5
    assert len(chpeed_py.das_dennis_points(99)) == 100

    try:
        chpeed_py.load_case("/nonexistent/case.toml")
    except ValueError:
        pass
    else:
        raise AssertionError("missing case file should raise ValueError")

    print(f"ok: {len(front)} archive members, BCS costs {[round(s['cost'], 1) for s in bcs]}")


if __name__ == "__main__":
    main()
