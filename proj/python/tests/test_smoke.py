# Copyright 2026 The privagg Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#      http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

import pytest

import privagg

SUM = "servers=3\nafe=sum b=4\ntimeout_ms=100\n"


def test_canonical_kind():
    assert privagg.canonical_kind("minmax   B=8 mode=max") == "minmax B=8 mode=max"
    with pytest.raises(privagg.PrivaggError, match="ParseError"):
        privagg.canonical_kind("teleport")


def test_oracle_and_aggregate_agree():
    values = ["1", "2", "3"]
    assert privagg.oracle("variance b=4", values) == privagg.aggregate(
        "variance b=4", values)
    assert privagg.aggregate("sum b=4", values, privagg.BABY_BEAR) == "sum=6"


def test_prove_and_verify():
    assert privagg.prove_and_verify(SUM, "9", seed=1)
    assert not privagg.prove_and_verify(SUM, "9", seed=1, forge="bad-triple")
    with pytest.raises(privagg.PrivaggError, match="DomainError"):
        privagg.prove_and_verify(SUM, "99")


def test_simulate():
    r = privagg.simulate(SUM, ["1", "2", "3"],
                         ["client 1 malformed coord=0 delta=7"], seed=5)
    assert r["accepted"] == 2
    assert r["aggregate"] == "sum=4"
    assert r["oracle_match"]
    assert "transcript_sha256=" in r["summary"]


def test_soundness_sweep_in_small_field():
    rows = privagg.soundness_sweep(SUM + "modulus=101\n", "3",
                                   ["bad-triple", "shifted-h"], 500, seed=2)
    assert [r["family"] for r in rows] == ["bad-triple", "shifted-h"]
    for r in rows:
        assert r["rate"] <= r["bound"] + 3 * r["sigma"]


def test_privacy_probe_detects_unblinded_prover():
    cfg = SUM + "modulus=101\n"
    honest = privagg.privacy_probe(cfg, "15", "0", 20000, seed=3)
    leaky = privagg.privacy_probe(cfg, "15", "0", 2000, seed=3, blind=False)
    assert honest["max_tv"] < 0.08
    assert leaky["max_tv"] > 0.5
