/*
 * Copyright (C) 2026 The mch Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

// Umbrella header for the whole library.

#include "mch/awb.hpp"
#include "mch/bench.hpp"
#include "mch/blend.hpp"
#include "mch/gct.hpp"
#include "mch/gtm.hpp"
#include "mch/image_codec.hpp"
#include "mch/metrics.hpp"
#include "mch/pipeline.hpp"
#include "mch/rig_io.hpp"
#include "mch/synth.hpp"
#include "mch/types.hpp"
