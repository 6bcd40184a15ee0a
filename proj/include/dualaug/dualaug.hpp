// Copyright 2026 The DualAug Authors.
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

#include "dualaug/branches.hpp"
#include "dualaug/classifier.hpp"
#include "dualaug/config.hpp"
#include "dualaug/dataset.hpp"
#include "dualaug/error.hpp"
#include "dualaug/gate.hpp"
#include "dualaug/rng.hpp"
#include "dualaug/trainer.hpp"
#include "dualaug/transforms.hpp"
