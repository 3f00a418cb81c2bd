"""Smoke test for the compiled extension.

Build it and put it on the path first, e.g.

    cargo build --release -p semigens-py --features extension-module
    mkdir -p target/py && cp target/release/libsemigens_py.so target/py/semigens.so
    PYTHONPATH=target/py python3 python/smoke_test.py
"""

from fractions import Fraction

import semigens
from semigens import Semigroup, Transformation


def main():
    f = Transformation([2, 3, 1])
    assert f == Transformation("[2,3,1]")
    assert str(f * f) == "[3,1,2]"
    assert f.rank() == 3 and f.is_permutation()
    assert f(1) == 2
    assert Transformation([1, 1, 2]).kernel() == [[1, 2], [3]]
    assert (f ** 3) == Transformation.identity(3)

    t3 = Semigroup([Transformation("[2,1,3]"), f, Transformation("[1,1,3]")])
    assert len(t3) == 27
    assert t3.rank() == 3
    assert [len(c) for c in sorted(t3.d_classes(), key=len)] == [3, 6, 18]
    assert t3.ordered_elements("asc")[0] == Transformation("[1,1,1]")
    report = t3.small_generating_set("desc")
    assert report["semigroup_size"] == 27 and report["size"] >= 3

    c3 = Semigroup([f])
    assert [str(s[0]) for s in c3.irredundant_generating_sets()] == ["[2,3,1]", "[3,1,2]"]
    assert c3.is_ubiquitous()
    assert semigens.greedy([Transformation.identity(3), f, f * f])["size"] == 2

    assert semigens.exact_probability("G", 3) == Fraction(7, 9)
    assert semigens.exact_probability("T", 2) == Fraction(3, 4)
    assert semigens.exact_probability("P", 1, k=3) == -14
    assert semigens.satisfies_sufficient_condition([Transformation("[1,1,2]")])

    est = semigens.estimate("G", 4, 20000, seed=3, workers=2)
    assert abs(est["p_hat"] - 37 / 64) < 0.02
    assert abs(semigens.lambert_w(1.0) - 0.5671432904097838) < 1e-15

    assert len(semigens.subsemigroups_t3()) == 282
    table = semigens.table1("desc", workers=2)
    assert table["class_count"] == 282

    try:
        Transformation([0, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("out-of-range image accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
