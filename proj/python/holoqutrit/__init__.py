# Copyright 2026 The holoqutrit Authors
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

"""Holonomic qutrit and cavity gate simulator."""

from ._core import (
    HoloError,
    HolonomicParams,
    __version__,
    clifford_table,
    crosstalk_mean,
    fit_chevron,
    fit_ramsey,
    fit_rb,
    gate_unitary,
    gf_gate_fidelity,
    gf_leakage,
    interleaved_fidelity,
    named_cavity_gate,
    named_qubit_gate,
    qpt_fidelities,
    run,
    target_u1,
)

__all__ = [
    "HoloError",
    "HolonomicParams",
    "__version__",
    "clifford_table",
    "crosstalk_mean",
    "fit_chevron",
    "fit_ramsey",
    "fit_rb",
    "gate_unitary",
    "gf_gate_fidelity",
    "gf_leakage",
    "interleaved_fidelity",
    "named_cavity_gate",
    "named_qubit_gate",
    "qpt_fidelities",
    "run",
    "target_u1",
]
