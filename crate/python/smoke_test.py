"""Smoke test for the compiled `veronese` extension module."""

import veronese


def main():
    v = veronese.Veronese(3, 2, 1)
    assert len(v) == 6 and v.codimension == 3
    assert v.variable_names() == ["x11", "x12", "x13", "x22", "x23", "x33"]
    assert len(v.generators()) == 6
    assert v.certificate() == ["x12^2 - x11*x22", "x13^2 - x11*x33", "x23^2 - x22*x33"]

    rw = v.rewrite([[1, 2], [1, 3], [2, 3]], [1, 3, 2, 4, 5, 6])
    assert rw["verified"] and rw["steps"][0]["cofactor"] == "x23"

    assert all(w["k"] <= 2 for w in v.verify_sci())
    assert "witness" not in v.points(2)
    assert v.points(3)["witness"] == [1, 1, 1, 1, 2, 1]
    full = v.points(5, set="full")
    assert full["count_V"] == full["count_cert"]

    tree = v.gluing()
    assert tree["kind"] == "node"

    w = v.parametrize([1, 1, 1], 5)
    assert v.jacobian(w, 5)["rank"] == 3
    assert v.fibers([1, 2, 3], 5)["equal"]

    table = veronese.cohomology(4, 3)
    assert set(table["orders"].values()) == {2}
    assert veronese.invariant_factors([[2, 1, 1], [1, 2, 1], [1, 1, 2]]) == [1, 1, 4]

    try:
        veronese.Veronese(3, 4, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("p = 4 accepted")

    try:
        v.points(7, budget=10)
    except RuntimeError:
        pass
    else:
        raise AssertionError("budget not enforced")

    print("smoke test passed")


if __name__ == "__main__":
    main()
