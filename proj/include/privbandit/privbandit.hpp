//
// Copyright 2026 The privbandit Authors
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
//

#ifndef PRIVBANDIT_PRIVBANDIT_HPP_
#define PRIVBANDIT_PRIVBANDIT_HPP_

#include "privbandit/config.hpp"
#include "privbandit/cppq.hpp"
#include "privbandit/env.hpp"
#include "privbandit/errors.hpp"
#include "privbandit/experiment.hpp"
#include "privbandit/harness.hpp"
#include "privbandit/lppq.hpp"
#include "privbandit/partition.hpp"
#include "privbandit/policy.hpp"
#include "privbandit/privacy.hpp"
#include "privbandit/prng.hpp"
#include "privbandit/report.hpp"
#include "privbandit/tree_agg.hpp"

#endif  // PRIVBANDIT_PRIVBANDIT_HPP_
