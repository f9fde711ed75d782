#pragma once

#include "app_io.hpp"
#include "applications.hpp"
#include "benchmarks.hpp"
#include "darkmode.hpp"
#include "dynamics.hpp"
#include "enumeration.hpp"
#include "errors.hpp"
#include "network.hpp"
#include "report_json.hpp"
#include "spec_io.hpp"
#include "spectral.hpp"
#include "sweep.hpp"
#include "tolerances.hpp"
