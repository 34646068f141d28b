#pragma once

#include "cuspforge/core.hpp"
#include "cuspforge/invariants.hpp"
#include "cuspforge/polynomial.hpp"
#include "cuspforge/series.hpp"
#include "cuspforge/puiseux.hpp"
#include "cuspforge/parametrization.hpp"
#include "cuspforge/surface.hpp"
#include "cuspforge/catalog.hpp"
#include "cuspforge/script.hpp"
#include "cuspforge/corpus.hpp"
