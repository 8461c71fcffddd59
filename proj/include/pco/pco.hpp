#pragma once

#include "pco/analysis.hpp"
#include "pco/config.hpp"
#include "pco/engine.hpp"
#include "pco/errors.hpp"
#include "pco/experiments.hpp"
#include "pco/graph.hpp"
#include "pco/graph_io.hpp"
#include "pco/maps.hpp"
#include "pco/oracles.hpp"
#include "pco/phase.hpp"
#include "pco/prc.hpp"
