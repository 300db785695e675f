"""Smoke test for the kneadlab Python module.

Build and install first, e.g. `pip install --no-build-isolation ./crates/py`,
then run `python python/smoke_test.py`.
"""

import math

import kneadlab


def main():
    assert kneadlab.families() == ["logistic", "sine"]

    k = kneadlab.kneading_sequence("logistic", 0.5)
    assert (k.word, k.termination) == ("C", "hit_C")
    assert kneadlab.kneading_sequence("logistic", 1.0, max_len=8).word == "RLLLLLLL"

    assert kneadlab.compare("RL", "RR") == "greater"
    w = kneadlab.Word("RLLC")
    assert w.is_finite and len(w) == 4 and w.is_shift_maximal()
    assert str(w.shift()) == "LLC"
    assert w.compare(kneadlab.Word("RLRC")) == "greater"

    rc = kneadlab.solve("logistic", "RC")
    assert abs(rc.mu_star - (1 + math.sqrt(5)) / 4) < 1e-10
    order = [r.target for r in kneadlab.solve_all("sine", 4)]
    assert order == ["C", "RC", "RLRC", "RLC", "RLLC"], order

    fixed = kneadlab.superstable("logistic", "RLC")
    assert len(fixed) == 1 and fixed[0]["verified"]
    assert kneadlab.level("logistic", "RL", 0.4) is None

    counts = [kneadlab.formula_count(n) for n in range(1, 11)]
    assert counts == [1, 1, 1, 2, 3, 5, 9, 16, 28, 51]
    assert kneadlab.enumerate_admissible(4) == ["RLRC", "RLLC"]

    assert kneadlab.lap_numbers("logistic", 1.0, 3) == [2, 4, 8]
    assert abs(kneadlab.entropy_lap("logistic", 1.0) - math.log(2)) < 1e-3
    golden = (1 + math.sqrt(5)) / 2
    assert abs(kneadlab.entropy_matrix("RLC") - math.log(golden)) < 1e-9

    report = kneadlab.schwarzian_check("sine", 20, 20)
    assert report["pass"] and report["min_s"] > 0

    sweep = kneadlab.kneading_sweep("logistic", 2000, 30)
    assert sweep["violations"] == [] and len(sweep["word"]) == 2000

    try:
        kneadlab.kneading_sequence("cubic", 0.5)
    except ValueError:
        pass
    else:
        raise AssertionError("unknown family accepted")

    print("kneadlab smoke test passed")


if __name__ == "__main__":
    main()
