"""Smoke test for the metlie_py extension.

Build and install first:  pip install --no-build-isolation -e crates/python
"""

import json

import metlie_py as m


def main():
    g = m.MetricLieAlgebra.from_json('{"dim": 2, "gram": [["1","0"],["0","1"]]}')
    report = json.loads(g.verify())
    assert report["jacobi"]["status"] == "pass", report
    assert g.passes() and g.is_abelian()
    assert g.signature() == (0, 2, 0)

    osc1 = m.Family("osc", [["1"], ["2"], ["3"]])
    osc2 = m.Family("osc", [["1"], ["3"], ["2"]])
    assert osc1.admissible()
    iso, _ = osc1.isomorphic(osc2)
    assert iso
    f = osc1.witness(osc2)
    assert f is not None and len(f) == 8
    assert not osc1.isomorphic(m.Family("osc", [["1"], ["2"], ["4"]]))[0]

    alg = osc1.build()
    assert alg.passes() and alg.dim == 8
    data, frame = alg.extract()
    assert data.build().signature() == alg.signature()
    assert data.equivalent(data) is not None
    assert data.is_regular()
    assert data.decompose() == "indecomposable"

    cls = json.loads(m.Family("dA", [["2"], ["1"]]).classify_index2())
    assert cls == {"case": 1, "lambda": ["1", "2"]}, cls

    plane = m.Family("osc", [["1", "0"], ["0", "1"], ["1", "1"]])
    assert json.loads(plane.invariant())["invariant"]["kind"] == "GRASSMANNIAN"
    try:
        plane.invariant(orbit_bound=2)
    except NotImplementedError:
        pass
    else:
        raise AssertionError("orbit bound not enforced")
    try:
        m.Family("osc", [["1"], ["x"]])
    except ValueError as e:
        assert "lambda" in str(e)
    else:
        raise AssertionError("bad rational accepted")

    print("metlie_py smoke test: ok")


if __name__ == "__main__":
    main()
