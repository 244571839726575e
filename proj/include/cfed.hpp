// Copyright 2026 The cfed Authors
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


#pragma once

// Everything in one include.

#include "cfed/assignment.hpp"
#include "cfed/channel.hpp"
#include "cfed/conesolve.hpp"
#include "cfed/energy.hpp"
#include "cfed/error.hpp"
#include "cfed/experiment.hpp"
#include "cfed/lp.hpp"
#include "cfed/milp.hpp"
#include "cfed/mipsolve.hpp"
#include "cfed/model.hpp"
#include "cfed/oracles.hpp"
#include "cfed/orchestrator.hpp"
#include "cfed/rng.hpp"
#include "cfed/scenario.hpp"
#include "cfed/socp.hpp"
