# Copyright 2026 The QGE Lab Authors. All Rights Reserved.
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
# ==============================================================================
"""Adaptive quantum gradient estimation lab."""

from qge_lab._core import (
    QgeError,
    binom_norm,
    cli,
    compare,
    dump_block_encoding,
    eigen_poly_transform,
    grid,
    load_block_encoding,
    observable_labels,
    readout_distribution,
    schedule,
    sector_norm,
    simulate,
    single_shot_success,
    total_queries,
    verify,
    version,
)

__version__ = version()

__all__ = [
    "QgeError",
    "binom_norm",
    "cli",
    "compare",
    "dump_block_encoding",
    "eigen_poly_transform",
    "grid",
    "load_block_encoding",
    "observable_labels",
    "readout_distribution",
    "schedule",
    "sector_norm",
    "simulate",
    "single_shot_success",
    "total_queries",
    "verify",
    "version",
]
