// SPDX-License-Identifier: Apache-2.0
//
// submimo - sub-GHz massive MIMO channel analysis toolkit
// Copyright (C) 2026 The submimo authors
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

#include "submimo/array_geometry.hpp"
#include "submimo/channel_tensor.hpp"
#include "submimo/csv_io.hpp"
#include "submimo/dataset_io.hpp"
#include "submimo/db.hpp"
#include "submimo/linksim.hpp"
#include "submimo/metrics.hpp"
#include "submimo/rng.hpp"
#include "submimo/srd860.hpp"
#include "submimo/synth.hpp"
