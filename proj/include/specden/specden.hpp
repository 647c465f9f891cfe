// Copyright 2026 the specden authors
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

// Umbrella header: dephasing-noise spectroscopy simulation and estimation.

#pragma once

#include "specden/bench.hpp"     // IWYU pragma: export
#include "specden/errors.hpp"    // IWYU pragma: export
#include "specden/filters.hpp"   // IWYU pragma: export
#include "specden/forward.hpp"   // IWYU pragma: export
#include "specden/gp.hpp"        // IWYU pragma: export
#include "specden/grid.hpp"      // IWYU pragma: export
#include "specden/io.hpp"        // IWYU pragma: export
#include "specden/naive.hpp"     // IWYU pragma: export
#include "specden/rng.hpp"       // IWYU pragma: export
#include "specden/smc.hpp"       // IWYU pragma: export
#include "specden/spectra.hpp"   // IWYU pragma: export
#include "specden/svg.hpp"       // IWYU pragma: export
