// Copyright 2026 The omlab Authors
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

// Umbrella header.

#ifndef OMLAB_OMLAB_HPP_
#define OMLAB_OMLAB_HPP_

#include "omlab/allocation.hpp"
#include "omlab/experiment.hpp"
#include "omlab/generators.hpp"
#include "omlab/instance.hpp"
#include "omlab/json_io.hpp"
#include "omlab/online.hpp"
#include "omlab/oracle.hpp"
#include "omlab/parallel.hpp"
#include "omlab/perturbation.hpp"
#include "omlab/rational.hpp"
#include "omlab/reductions.hpp"
#include "omlab/report.hpp"
#include "omlab/two_by_two.hpp"
#include "omlab/verifier.hpp"
#include "omlab/warmup.hpp"

#endif  // OMLAB_OMLAB_HPP_
