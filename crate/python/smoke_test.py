"""Smoke test for the occur_lab extension.

Build and run from the repository root:

    cargo build --release -p occur-lab-py --features extension-module
    cp target/release/liboccur_lab.so python/occur_lab.so
    python3 python/smoke_test.py
"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent))

import occur_lab as ol


def main():
    assert ol.normalize("f(X,b)=f(a,Y)") == "f(X, b) = f(a, Y)"

    t = ol.unify("f(X, b) = f(a, Y)")
    assert t.status == "solved", t
    assert t.mgu == "{X/a, Y/b}"
    assert [a for a, _ in t.steps] == ["1", "4"]
    doc = json.loads(t.to_json(0))
    assert doc["final"] == "{X = a, Y = b}"

    assert ol.is_nsto("X = f(X)") == "no"
    assert ol.is_nsto("f(X, Y) = f(a, g(Z))") == "yes"

    w = ol.ocf_run("pq(s(0),L,[L|A],B) = pq(I,[I|C],[I|D],[I|E])")
    assert w is not None and w.steps[-1][0] == "2"

    assert ol.is_semi_solved("X = f(X), Y = X")
    assert not ol.is_semi_solved("X = a, Y = f(X)")
    assert ol.i_equivalent("X = f(X)", "X = f(f(X))")
    assert not ol.has_i_solution("f(X) = g(X)")

    r = ol.unify("X = f(X), X = f(f(X))", algo="mma-minus", mode="restricted")
    assert r.status == "semi-solved" and r.final_state == "X = f(X)"

    assert [len(ol.queens_oracle(n)) for n in range(1, 5)] == [1, 0, 0, 2]
    d = ol.derive(ol.query_qin(3), depth=30, report=True)
    assert not d["success"] and d["finitely_failed"]
    assert d["all_available_nsto"] == "yes"

    s = ol.theorem_test(count=20, seed=1)
    assert s["passed"] and s["incorrect"] == 0

    try:
        ol.unify("X =")
    except ValueError:
        pass
    else:
        raise AssertionError("parse error not raised")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
