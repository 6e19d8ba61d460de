"""Smoke test for the agcolor Python module.

Build the module first, e.g. with `maturin develop -m crates/py/Cargo.toml`,
or copy target/release/libagcolor_py.so to agcolor.so on PYTHONPATH.
"""

import json

import agcolor


def main():
    f = agcolor.Field(9)
    assert (f.characteristic, f.degree, f.modulus) == (3, 2, [1, 0, 1])
    for a in range(1, 9):
        assert f.mul(a, f.inv(a)) == 1
    assert f.pow(f.primitive_element(), 8) == 1
    try:
        f.inv(0)
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("inverse of zero")

    c = agcolor.construct("even-pseudo", 4, 2)
    assert c.class_count == 29
    report = json.loads(c.verify(["proper", "complete"]))
    assert report["complete"]["holds"] and not report["proper"]["holds"]

    c = agcolor.construct("ag3-achromatic", 3, 2)
    assert c.class_count == 10
    assert json.loads(c.verify())["proper"]["holds"]
    again = agcolor.Coloring.from_json(c.to_json())
    assert again.to_json() == c.to_json()

    line = c.classes()[0][1][0]
    assert c.count_meeting_lines([line]) == 12
    assert agcolor.meeting_lines(3, 3, [agcolor.construct("chromatic", 3, 3).classes()[0][1][0]]) == 36

    row = json.loads(agcolor.bounds(3, 2))
    assert (row["psi_upper_exact"], row["alpha_lower"]) == (17, 10)

    assert agcolor.oracle(2, 3, "psi") == (8, 8, True)
    lower, upper, exact = agcolor.oracle(2, 4, "psi", max_nodes=1000)
    assert not exact and lower <= 12 <= upper

    try:
        agcolor.construct("even-pseudo", 3, 2)
    except ValueError as e:
        assert "requires even n" in str(e)
    else:
        raise AssertionError("odd n accepted")

    print("agcolor smoke test passed")


if __name__ == "__main__":
    main()
