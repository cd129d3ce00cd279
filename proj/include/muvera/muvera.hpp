// Copyright 2026 The muvera-cpp Authors.
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

#pragma once

#include "muvera/chamfer.hpp"
#include "muvera/common.hpp"
#include "muvera/eval.hpp"
#include "muvera/fde.hpp"
#include "muvera/index.hpp"
#include "muvera/io.hpp"
#include "muvera/kmeans.hpp"
#include "muvera/multivector.hpp"
#include "muvera/parallel.hpp"
#include "muvera/partition.hpp"
#include "muvera/pq.hpp"
#include "muvera/projection.hpp"
#include "muvera/retrieval.hpp"
#include "muvera/sv_baseline.hpp"
#include "muvera/synth.hpp"
