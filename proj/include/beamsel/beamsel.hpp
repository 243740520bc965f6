// SPDX-License-Identifier: Apache-2.0
//
// beamsel - beam selection for beamspace mmWave massive MIMO
// Copyright (C) 2026 The beamsel authors
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

#ifndef BEAMSEL_BEAMSEL_HPP
#define BEAMSEL_BEAMSEL_HPP

#include "beamsel/core.hpp"
#include "beamsel/channel.hpp"
#include "beamsel/precoding.hpp"
#include "beamsel/selectors.hpp"
#include "beamsel/aco.hpp"
#include "beamsel/experiment.hpp"
#include "beamsel/config.hpp"
#include "beamsel/validate.hpp"

#endif
