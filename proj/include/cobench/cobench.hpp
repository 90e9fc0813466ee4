// Copyright 2026 The cobench Authors
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


// Everything except the network server (cobench/harness/server.hpp).

#pragma once

#include "cobench/baselines.hpp"
#include "cobench/common.hpp"
#include "cobench/controllers.hpp"
#include "cobench/dynamics.hpp"
#include "cobench/harness/batch.hpp"
#include "cobench/harness/config.hpp"
#include "cobench/harness/corpus.hpp"
#include "cobench/harness/live.hpp"
#include "cobench/harness/log_io.hpp"
#include "cobench/harness/trial.hpp"
#include "cobench/intent/ingest.hpp"
#include "cobench/intent/lstm.hpp"
#include "cobench/intent/model_io.hpp"
#include "cobench/intent/standardize.hpp"
#include "cobench/intent/training.hpp"
#include "cobench/intent/window.hpp"
#include "cobench/leader.hpp"
#include "cobench/metrics.hpp"
#include "cobench/nnpc.hpp"
#include "cobench/signals.hpp"
#include "cobench/stats.hpp"
