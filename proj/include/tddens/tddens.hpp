// Copyright 2026 The tddens Authors
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

#include "tddens/benchmark.hpp"
#include "tddens/direct_z.hpp"
#include "tddens/errors.hpp"
#include "tddens/estimate.hpp"
#include "tddens/fermion_model.hpp"
#include "tddens/harmonic_inversion.hpp"
#include "tddens/measurement.hpp"
#include "tddens/pauli.hpp"
#include "tddens/smc.hpp"
#include "tddens/statevector.hpp"
