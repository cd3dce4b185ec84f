"""Smoke test for the quiverkit Python module."""

import json
import pathlib

import quiverkit as qk

FIXTURES = pathlib.Path(__file__).resolve().parent.parent / "fixtures"


def load(name):
    return qk.Graph.from_json((FIXTURES / f"{name}.json").read_text())


def main():
    assert qk.optimal_bound(16, 3) == 150
    m = qk.maximizer(16, 3)
    assert m.count_paths(3) == m.count_paths(3, engine="dfs") == 150

    counts, holds, final = qk.maximize(load("worked_example"), 3)
    assert counts[0] == 6 and counts[-1] == 150 and holds
    assert final.count_paths(3) == 150

    dag = load("nilpotent_dag")
    assert dag.count_paths(2) == 15
    assert dag.nilpotency_index() == 5

    mixed = load("mixed_three")
    assert len(qk.hereditary_subsets(mixed)) == 4
    assert len(qk.saturated_subsets(mixed)) == 6

    line = qk.Graph(["v", "w"], [("e", "v", "w")])
    assert qk.leavitt_reduce(line, "e* e") == "w"
    assert qk.leavitt_dim(line) == "4"
    assert qk.path_algebra_dim(line) == "3"
    assert qk.path_multiply(line, ["v"], ["e"]) == "e"

    other = qk.Graph(["a", "b"], [("h", "a", "b"), ("k", "a", "b")])
    report = json.loads(qk.pullback_check(line, other))
    assert report["passed"] and report["dims"]["pullback"] == "13"

    try:
        qk.optimal_bound(2, 3)
    except qk.QuiverkitError:
        pass
    else:
        raise AssertionError("expected QuiverkitError")
    print("smoke test passed")


if __name__ == "__main__":
    main()
