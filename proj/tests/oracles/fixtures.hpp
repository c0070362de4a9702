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

namespace fixtures {

// Rain -> Sprinkler, Rain -> Wet, Sprinkler -> Wet; value 1 means "true".
inline constexpr std::size_t kRain = 0, kSprinkler = 1, kWet = 2;

inline qpomdp::BayesNet sprinkler() {
    using namespace qpomdp;
    return build_net({{"Rain", 2, {}}, {"Sprinkler", 2, {kRain}}, {"Wet", 2, {kRain, kSprinkler}}},
                     {{kRain, {{0.9, 0.1}}},
                      {kSprinkler, {{0.6, 0.4}, {0.99, 0.01}}},
                      {kWet, {{0.6, 0.4}, {0.1, 0.9}, {0.01, 0.99}, {0.01, 0.99}}}});
}

inline qpomdp::BayesNet constant() { return qpomdp::build_net({{"C", 1, {}}}, {{0, {{1.0}}}}); }

/// Small mixed-cardinality net with a parent listed after its child's index.
inline qpomdp::BayesNet mixed() {
    using namespace qpomdp;
    return build_net({{"A", 3, {2}}, {"B", 2, {}}, {"C", 2, {1}}, {"D", 4, {0, 2}}},
                     {{0, {{0.2, 0.3, 0.5}, {0.6, 0.3, 0.1}}},
                      {1, {{0.35, 0.65}}},
                      {2, {{0.8, 0.2}, {0.25, 0.75}}},
                      {3,
                       {{0.1, 0.2, 0.3, 0.4},
                        {0.25, 0.25, 0.25, 0.25},
                        {0.7, 0.1, 0.1, 0.1},
                        {0.05, 0.05, 0.45, 0.45},
                        {0.4, 0.3, 0.2, 0.1},
                        {0.0, 0.5, 0.0, 0.5}}}});
}

}  // namespace fixtures
