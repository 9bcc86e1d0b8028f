"""Smoke test for the qwvd Python module.

Build and run from the repository root:

    cargo build -p qwvd-py --features extension-module
    mkdir -p target/py && cp target/debug/libqwvd_py.so target/py/qwvd.so
    PYTHONPATH=target/py python3 python/smoke_test.py

or `maturin develop -m crates/py/Cargo.toml` inside a virtualenv.
"""

import math

import qwvd


def close(a, b, tol):
    return all(abs(x - y) <= tol for x, y in zip(a, b))


def main():
    i, j = qwvd.Quaternion(0, 1), qwvd.Quaternion(0, 0, 1)
    assert (i * j).to_tuple() == (0.0, 0.0, 0.0, 1.0)
    assert (j * i).to_tuple() == (0.0, 0.0, 0.0, -1.0)

    f = qwvd.Signal()
    assert abs(f.l2_norm() - math.sqrt(0.5)) < 1e-12
    assert f(0.0, 0.0).to_tuple() == (1.0, 0.0, 0.0, 0.0)

    c = 0.25 / math.pi
    assert close(qwvd.qolct(f, (0.0, 0.0)).to_tuple(), (c, -c, -c, c), 1e-6)

    peak = qwvd.wvd(f, (0.0, 0.0), (0.0, 0.0))
    assert abs(peak.norm() - 1.0 / math.pi) < 1e-6

    h = qwvd.convolve(f, f, (1.0, 1.0))
    assert abs(h.w - 0.5 * math.exp(-math.pi)) < 1e-4

    try:
        qwvd.OlctParams(1, 2, 1, 1)
    except ValueError as e:
        assert "determinant" in str(e)
    else:
        raise AssertionError("determinant not checked")

    generic = qwvd.OlctParams(1, 2, 1, 3, 0.5, -0.7)
    pair = qwvd.ParamPair(generic, generic)
    q = qwvd.Signal.parse("coeff=1,1,1,1;alpha=3.14159")
    (report,) = qwvd.verify("plancherel", q, params=pair)
    assert report["pass"], report
    reports = qwvd.verify("convolution", all_variants=True)
    assert len(reports) == 4
    assert all(r["theorem_mismatch"] for r in reports)

    print("qwvd smoke test passed")


if __name__ == "__main__":
    main()
