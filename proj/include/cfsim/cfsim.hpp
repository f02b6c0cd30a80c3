#pragma once

#include "cfsim/checkpoint.hpp"
#include "cfsim/config.hpp"
#include "cfsim/diagnostics.hpp"
#include "cfsim/errors.hpp"
#include "cfsim/grid.hpp"
#include "cfsim/harness.hpp"
#include "cfsim/lemma_suite.hpp"
#include "cfsim/lemmas.hpp"
#include "cfsim/manufactured.hpp"
#include "cfsim/operators.hpp"
#include "cfsim/report.hpp"
#include "cfsim/solvers.hpp"
#include "cfsim/stepper.hpp"
