#pragma once

#include "ltvcomm/catalog.hpp"
#include "ltvcomm/commute.hpp"
#include "ltvcomm/error.hpp"
#include "ltvcomm/expr_parser.hpp"
#include "ltvcomm/ltvsys.hpp"
#include "ltvcomm/runner.hpp"
#include "ltvcomm/scenario.hpp"
#include "ltvcomm/selftest.hpp"
#include "ltvcomm/signalgen.hpp"
#include "ltvcomm/simulate.hpp"
#include "ltvcomm/spectrum.hpp"
#include "ltvcomm/timefn.hpp"
