#pragma once

#include "lapgraph/counting.hpp"
#include "lapgraph/diagrams.hpp"
#include "lapgraph/errors.hpp"
#include "lapgraph/exact.hpp"
#include "lapgraph/graph.hpp"
#include "lapgraph/mc.hpp"
#include "lapgraph/parallel.hpp"
#include "lapgraph/power_series.hpp"
#include "lapgraph/random.hpp"
#include "lapgraph/rational.hpp"
#include "lapgraph/set_partition.hpp"
#include "lapgraph/weights.hpp"

namespace lapgraph {

inline constexpr const char* kVersion = "1.0.0";

}  // namespace lapgraph
