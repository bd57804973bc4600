#pragma once

#include "qac/analysis.hpp"
#include "qac/coin_collector.hpp"
#include "qac/cost_function.hpp"
#include "qac/dyadic.hpp"
#include "qac/errors.hpp"
#include "qac/linear_space.hpp"
#include "qac/nodeset_coder.hpp"
#include "qac/numeric.hpp"
#include "qac/oracles.hpp"
#include "qac/penalty_spec.hpp"
#include "qac/sampling.hpp"
#include "qac/source_distribution.hpp"
#include "qac/source_io.hpp"
#include "qac/stats.hpp"
