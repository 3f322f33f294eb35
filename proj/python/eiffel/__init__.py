# Copyright 2026 The EIFFeL Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Secure aggregation with verified inputs."""

import csv
import io
import json

from ._eiffel import (
    field_add,
    field_inv,
    field_mul,
    modulus,
    quantize,
    random_project,
    robust_reconstruct,
    run_iteration,
    run_training_raw,
    share,
)


def _text_overrides(overrides):
    return {str(k): str(v) for k, v in (overrides or {}).items()}


def run_training(config="", **overrides):
    """Runs the three training arms; returns (metrics dict, accuracy rows)."""
    metrics, accuracy = run_training_raw(config, _text_overrides(overrides))
    return json.loads(metrics), list(csv.DictReader(io.StringIO(accuracy)))


__all__ = [
      "field_add",
      "field_inv",
      "field_mul",
      "modulus",
      "quantize",
      "random_project",
      "robust_reconstruct",
      "run_iteration",
      "run_training",
      "run_training_raw",
      "share",
]
