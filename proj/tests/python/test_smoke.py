import json
import math
from fractions import Fraction

import pytest

import designcount


def test_counts():
    assert designcount.count("sts", 9)["count"] == 840
    assert designcount.count("1f", 6, labeled=True)["count"] == 720
    assert designcount.count("latin", 5, jobs=2)["count"] == 161280
    partial = designcount.count("sts", 13, node_budget=500)
    assert not partial["complete"]


def test_validate_round_trip():
    fano = {"kind": "sts", "n": 7,
            "triples": [[1, 2, 3], [1, 4, 5], [1, 6, 7], [2, 4, 6], [2, 5, 7], [3, 4, 7], [3, 5, 6]]}
    assert json.loads(designcount.validate(json.dumps(fano))) == fano
    fano["triples"][1] = [1, 2, 4]
    with pytest.raises(designcount.DesignError, match="DuplicatePair"):
        designcount.validate(json.dumps(fano))


def test_bounds():
    b = designcount.bounds(9, ["wilson-lower", "wilson-upper"])
    assert b["wilson-lower"] <= math.log(840) <= b["wilson-upper"]
    with pytest.raises(ValueError):
        designcount.bounds(6, ["cameron-lower"])


def test_verify_returns_fractions():
    rows = designcount.verify("dist-p", "1f", 6)
    assert rows[0]["observed"] == Fraction(1, 3)
    assert all(r["pass"] for r in rows)
    exp_m = designcount.verify("exp-m", "1f", 6)
    assert exp_m[0]["observed"] == 5
    assert exp_m[0]["alternative"] == Fraction(17, 5)


def test_entropy_and_sums():
    e = designcount.entropy("1f", 4, 0)
    assert e["mode"] == "exact" and e["bound_holds"]
    assert designcount.entropy("sts", 7, 2000, seed=3) == designcount.entropy("sts", 7, 2000, seed=3, jobs=4)
    total, target = designcount.finite_sum("sts", 10000)
    assert abs(total - target) < 0.1


def test_cli():
    code, out, err = designcount.cli(["count", "--object", "sts", "--n", "7"])
    assert code == 0 and json.loads(out)["count"] == "30"
    assert designcount.cli(["bounds", "--n", "6", "--list", "cameron-lower"])[0] == 1
