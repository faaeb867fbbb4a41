// SPDX-License-Identifier: Apache-2.0
//
// hmimo: sub-connected hybrid massive-MIMO rate analysis and simulation
// Copyright (C) 2026 The hmimo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#ifndef HMIMO_HMIMO_HPP
#define HMIMO_HMIMO_HPP

#include "hmimo/beamformers.hpp"
#include "hmimo/closed_form.hpp"
#include "hmimo/config.hpp"
#include "hmimo/harness.hpp"
#include "hmimo/moment_oracles.hpp"
#include "hmimo/parallel.hpp"
#include "hmimo/random.hpp"
#include "hmimo/rate_engine.hpp"
#include "hmimo/system_model.hpp"

#endif
