#pragma once

#include "zenospin/error.hpp"
#include "zenospin/linalg.hpp"
#include "zenospin/spin_algebra.hpp"
#include "zenospin/magnetics.hpp"
#include "zenospin/liouville.hpp"
#include "zenospin/spectral.hpp"
#include "zenospin/dynamics.hpp"
#include "zenospin/sensitivity.hpp"
#include "zenospin/scenario.hpp"
#include "zenospin/csv.hpp"
#include "zenospin/runner.hpp"
#include "zenospin/validate.hpp"
