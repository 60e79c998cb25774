// Copyright 2026 The gmnlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Convenience header: the whole library.

#pragma once

#include "gmnlab/channel.hpp"
#include "gmnlab/dynamics.hpp"
#include "gmnlab/error.hpp"
#include "gmnlab/gmn.hpp"
#include "gmnlab/matcore.hpp"
#include "gmnlab/rng.hpp"
#include "gmnlab/sdp.hpp"
#include "gmnlab/state_io.hpp"
#include "gmnlab/states.hpp"
#include "gmnlab/version.hpp"
