// Copyright 2026 The qidt Authors
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

#include "qidt/config.hpp"
#include "qidt/disturbance.hpp"
#include "qidt/errors.hpp"
#include "qidt/frontier.hpp"
#include "qidt/galois.hpp"
#include "qidt/information.hpp"
#include "qidt/linalg.hpp"
#include "qidt/measurement.hpp"
#include "qidt/parallel.hpp"
#include "qidt/rng.hpp"
