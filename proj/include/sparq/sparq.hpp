// Copyright 2026 The SparQ Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Everything in one include.

#pragma once

#include "sparq/error.hpp"
#include "sparq/core/sparse_state.hpp"
#include "sparq/exec/config.hpp"
#include "sparq/exec/parallel.hpp"
#include "sparq/exec/profiler.hpp"
#include "sparq/exec/speedup.hpp"
#include "sparq/gates/gates.hpp"
#include "sparq/qram/qram.hpp"
#include "sparq/qasm/qasm.hpp"
#include "sparq/qlss/sweep.hpp"
#include "sparq/bench/scaling.hpp"
#include "sparq/bench/table.hpp"
