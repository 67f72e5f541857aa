// SPDX-License-Identifier: Apache-2.0
//
// fdrelay: finite-N and asymptotic rate analysis for full-duplex massive MIMO relays
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

#pragma once

#include "fdrelay/tensor.hpp"
#include "fdrelay/rng.hpp"
#include "fdrelay/config.hpp"
#include "fdrelay/config_io.hpp"
#include "fdrelay/channel.hpp"
#include "fdrelay/beamform.hpp"
#include "fdrelay/finite_rate.hpp"
#include "fdrelay/asymptotic.hpp"
#include "fdrelay/experiment.hpp"
