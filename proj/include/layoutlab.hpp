// Copyright 2026 The LayoutLab Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
#pragma once

#include "layoutlab/backends.hpp"
#include "layoutlab/coco_layouts.hpp"
#include "layoutlab/codec.hpp"
#include "layoutlab/core.hpp"
#include "layoutlab/detector.hpp"
#include "layoutlab/engine.hpp"
#include "layoutlab/errors.hpp"
#include "layoutlab/image_io.hpp"
#include "layoutlab/metrics.hpp"
#include "layoutlab/pipeline.hpp"
#include "layoutlab/remote_backend.hpp"
#include "layoutlab/renderer.hpp"
#include "layoutlab/sampler.hpp"
#include "layoutlab/serialization.hpp"
#include "layoutlab/service.hpp"
#include "layoutlab/training.hpp"
