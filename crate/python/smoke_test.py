"""Smoke test for the `ccs` extension module.

Build and install first:
    maturin build --release -m crates/py/Cargo.toml -o dist && pip install dist/ccs-*.whl
"""

import ccs


def main():
    p = ccs.parse("a.0 | 'a.0")
    moves = p.transitions()
    assert [u for u, _ in moves] == ["a", "'a", "t"], moves
    assert str(dict(moves)["t"]) == "0 | 0"

    assert ccs.check("weak", "t.a.0", "a.0").holds
    rooted = ccs.check("rooted", "t.a.0", "a.0")
    assert not rooted and rooted.distinguisher
    assert ccs.check("contraction", "a.0 + t.a.0", "a.0")
    assert not ccs.check("expansion", "a.0", "a.0 + t.a.0")

    lts = ccs.explore(ccs.Process("rec A. (a.A + b.0)"))
    assert len(lts) == 2 and lts.root == 0
    assert "digraph" in lts.to_dot()

    classes = ccs.classify("_")
    assert classes["seq"] and classes["context"] and not classes["wg"]
    body = ccs.Context("a._")
    assert str(body.apply("0")) == "a.0"

    report = ccs.unique_solution("contraction", "a._", "rec A. a.A", "rec A. a.t.A")
    assert report.guarantee_met and all(ok for _, ok in report.checks), report.checks
    negative = ccs.unique_solution("weak", "nu {a} (a._ | 'a.0)", "0", "b.0")
    assert not negative.guarantee_met and ("body is seq", False) in negative.checks

    try:
        ccs.parse("a.(")
    except ccs.CcsError as e:
        assert "syntax" in str(e)
    else:
        raise AssertionError("syntax error not raised")

    reports = ccs.run_suite(seed=7, cases=10)
    assert all(r.ok() for r in reports), [r for r in reports if not r.ok()]
    print(f"ok: {len(reports)} properties")


if __name__ == "__main__":
    main()
