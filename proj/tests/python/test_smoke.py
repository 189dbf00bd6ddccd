import json
import os
from pathlib import Path

import pytest

import coxkl

DATA = Path(os.environ.get("COXKL_DATA_DIR", Path(__file__).resolve().parents[2] / "data"))


def system(name):
    return DATA / "systems" / f"{name}.json"


@pytest.fixture(scope="module")
def a1():
    return coxkl.load(system("a1"))


@pytest.fixture(scope="module")
def a2():
    return coxkl.load(system("a2"))


def test_version_and_suites():
    assert coxkl.__version__
    assert "involution" in coxkl.suite_names()
    assert "group-engine" in coxkl.suite_names()


def test_word_problem(a2):
    assert a2.generators == ["s1", "s2"]
    assert a2.is_finite
    assert a2.reduce("s1,s1,s2") == "s2"
    assert a2.length("s1,s2,s1") == 3
    assert a2.bruhat_leq("s2", "s1,s2,s1")
    assert not a2.bruhat_leq("s1,s2", "s2,s1")


def test_load_accepts_parsed_json():
    with open(system("b2"), encoding="utf-8") as fh:
        session = coxkl.load(json.load(fh))
    assert session.length("s1,s2,s1,s2") == 4
    assert session.hat_type == "F4"


def test_classical_polynomials():
    a3 = coxkl.load(system("a3"))
    assert a3.kl_p("1", "s2,s1,s3,s2")["q"] == {"0": 1, "1": 1}
    assert a3.kl_p("s1,s3", "s2,s1,s3,s2")["q"] == {"0": 1}
    assert a3.r_tilde("1", "s1")["abar"] == {"1": 1}


def test_springer_poset(a1, a2):
    assert len(a1.elements()) == 6
    assert len(a2.elements()) == 78
    assert a1.dim("[∅;1;1]") == 0
    assert a1.b("[∅;1;1]", "[S;1;1]")["abar"] == {"1": 1}
    assert a1.b("[S;1;1]", "[∅;1;1]")["u"] == {}
    assert a1.leq("[∅;1;1]", "[S;1;1]")
    assert a1.mobius("[∅;1;1]", "[S;1;1]") == -1
    assert a1.c("[S;1;1]", "[S;1;1]")["q"] == {"0": 1}


def test_hat_route_matches_b(a1):
    elems = a1.elements()
    for w in elems:
        for v in elems:
            assert a1.r_a(a1.phi(w), a1.phi(v))["u"] == a1.b(w, v)["u"]
            assert a1.p_a(a1.phi(w), a1.phi(v))["q"] == a1.c(w, v)["q"]


def test_hat_config(a1):
    hat = coxkl.load(system("a1"), DATA / "hats" / "a1_i2_inf.json")
    assert hat.hat_type == "infinite"
    for w in a1.elements():
        assert hat.b(w, "[S;1;1]") == a1.b(w, "[S;1;1]")


def test_errors(a1):
    with pytest.raises(ValueError):
        a1.reduce("s,u")
    with pytest.raises(ValueError):
        a1.dim("[S;s;1]")
    inf = coxkl.load(system("i2inf"))
    assert not inf.is_finite
    with pytest.raises(coxkl.InfiniteGroupError):
        inf.verify("finite-classical")


def test_verify(a1, a2):
    report = a1.verify("involution")
    assert report["suite"] == "involution"
    assert report["pass"] is True
    assert len(report["cases"]) > 0
    assert a2.verify("iso")["pass"] is True
    first = a1.verify("b-dual-route", seed=7)
    second = a1.verify("b-dual-route", seed=7)
    first.pop("duration_seconds")
    second.pop("duration_seconds")
    assert first == second
