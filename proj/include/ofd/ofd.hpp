#pragma once

#include "ofd/analytics/bullwhip.hpp"
#include "ofd/analytics/eda.hpp"
#include "ofd/analytics/metrics.hpp"
#include "ofd/core/checksum.hpp"
#include "ofd/core/date.hpp"
#include "ofd/core/error.hpp"
#include "ofd/core/rng.hpp"
#include "ofd/core/stats.hpp"
#include "ofd/core/text.hpp"
#include "ofd/inventory/newsvendor.hpp"
#include "ofd/lstm/adam.hpp"
#include "ofd/lstm/model_io.hpp"
#include "ofd/lstm/network.hpp"
#include "ofd/lstm/train.hpp"
#include "ofd/pipeline/config.hpp"
#include "ofd/pipeline/stages.hpp"
#include "ofd/preprocess/encoding.hpp"
#include "ofd/preprocess/features.hpp"
#include "ofd/preprocess/scaler.hpp"
#include "ofd/preprocess/windows.hpp"
#include "ofd/sim/config.hpp"
#include "ofd/sim/dataset.hpp"
#include "ofd/sim/models.hpp"
#include "ofd/sim/simulation.hpp"
#include "ofd/sim/types.hpp"
#include "ofd/tuner/grid_search.hpp"
