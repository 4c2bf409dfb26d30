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

"""Private aggregation with secret-shared non-interactive proofs."""

from ._privagg import (
    BABY_BEAR,
    GOLDILOCKS,
    PrivaggError,
    aggregate,
    canonical_kind,
    oracle,
    privacy_probe,
    prove_and_verify,
    simulate,
    soundness_sweep,
)

__all__ = [
    "BABY_BEAR",
    "GOLDILOCKS",
    "PrivaggError",
    "aggregate",
    "canonical_kind",
    "oracle",
    "privacy_probe",
    "prove_and_verify",
    "simulate",
    "soundness_sweep",
]
