// SPDX-License-Identifier: Apache-2.0
//
// romaxl — rotatable planar-array XL-MIMO LoS channel analysis for
// high-speed rail links
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

#ifndef ROMAXL_ROMAXL_HPP
#define ROMAXL_ROMAXL_HPP

#include "romaxl/channel.hpp"
#include "romaxl/correlation.hpp"
#include "romaxl/experiments.hpp"
#include "romaxl/geometry.hpp"
#include "romaxl/optimizer.hpp"
#include "romaxl/trajectory.hpp"
#include "romaxl/version.hpp"

#endif  // ROMAXL_ROMAXL_HPP
