"""Smoke test for the `dicho` extension module."""

import pathlib

import dicho

ROOT = pathlib.Path(__file__).resolve().parent.parent
EXAMPLE1 = [[11, 11, 14], [13, 16, 11], [15, 9, 17], [19, 14, 10]]


def main():
    inst = dicho.Instance.load(ROOT / "fixtures" / "example1.txt")
    assert (inst.kind, inst.p, inst.n) == ("ap", 3, 4), inst

    for algorithm in ("dummy", "bd"):
        for arithmetic in ("exact", "float"):
            points, stats = dicho.solve(inst, algorithm=algorithm, arithmetic=arithmetic)
            assert points == EXAMPLE1, (algorithm, arithmetic, points)
            assert stats["ysn1"] == 4
            if arithmetic == "exact":
                assert stats["float_calls"] == 0

    assert dicho.enumerate_ysn1(inst) == EXAMPLE1
    y, perm = inst.weighted_sum([1, -40, -28])
    assert y == [16, 20, 16], y
    assert sorted(perm) == [0, 1, 2, 3]

    assert dicho.final_filter([[0, 4], [2, 2], [4, 0]]) == [[0, 4], [4, 0]]

    hull = dicho.ConvexHull(3)
    for p in ([0, 0, 0], [4, 0, 0], [0, 4, 0], [0, 0, 4], [1, 1, 1]):
        hull.insert(p)
    assert hull.insert([1, 1, 0]) == "inside"
    assert hull.vertices() == [[0, 0, 0], [0, 0, 4], [0, 4, 0], [4, 0, 0]]
    assert hull.num_facets() == 4

    kp = dicho.Instance.generate("kp", 3, 10, seed=3)
    assert dicho.Instance.parse(kp.to_text()).to_text() == kp.to_text()
    points, _ = dicho.solve(kp, algorithm="bd")
    assert points == dicho.enumerate_ysn1(kp)

    try:
        dicho.Instance.parse("MOAP 2 2\n1 2\n")
    except ValueError:
        pass
    else:
        raise AssertionError("malformed instance accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
