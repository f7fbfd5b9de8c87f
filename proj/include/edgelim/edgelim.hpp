#pragma once

#include "edgelim/eliminator.hpp"
#include "edgelim/error.hpp"
#include "edgelim/hypergraph.hpp"
#include "edgelim/matio.hpp"
#include "edgelim/ordering.hpp"
#include "edgelim/random.hpp"
#include "edgelim/report.hpp"
#include "edgelim/secular.hpp"
#include "edgelim/sparsity_pattern.hpp"
