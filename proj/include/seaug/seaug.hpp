// Copyright 2026 the seaug authors
// License: Apache 2.0 (http://www.apache.org/licenses/LICENSE-2.0)

#pragma once

#include "seaug/audio.hpp"
#include "seaug/augment.hpp"
#include "seaug/corpus.hpp"
#include "seaug/enhance.hpp"
#include "seaug/error.hpp"
#include "seaug/fft.hpp"
#include "seaug/folds.hpp"
#include "seaug/manifest.hpp"
#include "seaug/materialize.hpp"
#include "seaug/metrics.hpp"
#include "seaug/noise.hpp"
#include "seaug/parallel.hpp"
#include "seaug/plan.hpp"
#include "seaug/resample.hpp"
#include "seaug/rng.hpp"
#include "seaug/specmix.hpp"
#include "seaug/stft.hpp"
#include "seaug/strategy.hpp"
#include "seaug/wav.hpp"
