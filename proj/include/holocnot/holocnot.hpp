// Copyright 2026 The holocnot Authors
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

// Everything except the command-line front end.

#pragma once

#include "config.hpp"
#include "dressed.hpp"
#include "evolve.hpp"
#include "hilbert.hpp"
#include "integrator.hpp"
#include "model.hpp"
#include "nelder_mead.hpp"
#include "optimize.hpp"
#include "parallel.hpp"
#include "stark.hpp"
#include "tomography.hpp"
#include "version.hpp"
