// Copyright 2026 The qpomdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include "qpomdp/bayes_net.hpp"
#include "qpomdp/bench.hpp"
#include "qpomdp/complexity.hpp"
#include "qpomdp/envs.hpp"
#include "qpomdp/error.hpp"
#include "qpomdp/ledger.hpp"
#include "qpomdp/planner.hpp"
#include "qpomdp/pomdp.hpp"
#include "qpomdp/quantum_sim.hpp"
#include "qpomdp/rng.hpp"
#include "qpomdp/text_format.hpp"
#include "qpomdp/validate.hpp"
