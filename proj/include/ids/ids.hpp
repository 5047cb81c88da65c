#pragma once

#include "ids/case_io.hpp"
#include "ids/core_types.hpp"
#include "ids/csv.hpp"
#include "ids/experiment.hpp"
#include "ids/problems.hpp"
#include "ids/rng.hpp"
#include "ids/run_log.hpp"
#include "ids/selection.hpp"
#include "ids/stats.hpp"
#include "ids/stats_report.hpp"
#include "ids/vm/evaluate.hpp"
#include "ids/vm/instructions.hpp"
#include "ids/vm/interpreter.hpp"
#include "ids/vm/plushy.hpp"
