#pragma once

#include "dishts/backbone.hpp"
#include "dishts/bench.hpp"
#include "dishts/checkpoint.hpp"
#include "dishts/conet.hpp"
#include "dishts/csv.hpp"
#include "dishts/diagnostics.hpp"
#include "dishts/pipeline.hpp"
#include "dishts/runner.hpp"
#include "dishts/series.hpp"
#include "dishts/synthetic.hpp"
#include "dishts/tape.hpp"
#include "dishts/training.hpp"
