# Copyright (C) 2026 swamp Development Team.
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


import os

pj = lambda *paths: os.path.abspath(os.path.expanduser(os.path.join(*paths)))
core_root = os.path.abspath(os.path.dirname(__file__))
package_root = pj(core_root, "../")
scenario_dir = pj(package_root, "scenarios")


# Backend settings.
backend_name = os.environ.get("SWAMP_BACKEND", "serial")
num_cpus = (
    int(os.environ["SWAMP_NUM_CPUS"]) if "SWAMP_NUM_CPUS" in os.environ else None
)
# An address to which the Ray client should connect.
address = None


# Logging settings.
log_level = os.environ.get("PLAN_LOG", "info").upper()


# Automaton settings.
# Upper bound on |Q|^(|xi|+1) for the run-enumeration oracle.
enumeration_cap = 200000
# Builders refuse to emit automata larger than this.
max_locations = 10000
# States sampled per location by the determinism / completeness spot checks.
sample_count = 10000
# Box from which spot-check states are sampled, per state dimension.
sample_box = (-10.0, 10.0)
# Spot-check samples per location when run reports build the complement.
report_sample_count = 500


# Numerical settings.
# Central finite-difference step used by gradient checks.
fd_step = 1e-5
# Progress is logged every this many MPC steps.
mpc_log_every = 50
