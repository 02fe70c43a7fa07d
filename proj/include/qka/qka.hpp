// Copyright 2026 The qka authors
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

// Umbrella header.

#pragma once

#include "qka/density.hpp"
#include "qka/discrimination.hpp"
#include "qka/errors.hpp"
#include "qka/json_io.hpp"
#include "qka/matrix.hpp"
#include "qka/measurement.hpp"
#include "qka/nosignalling.hpp"
#include "qka/protocol.hpp"
#include "qka/random.hpp"
#include "qka/states.hpp"
