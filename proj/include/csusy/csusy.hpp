#pragma once

#include "csusy/catalog.hpp"
#include "csusy/chain.hpp"
#include "csusy/config.hpp"
#include "csusy/differentiate.hpp"
#include "csusy/dirac.hpp"
#include "csusy/errors.hpp"
#include "csusy/grid.hpp"
#include "csusy/ode.hpp"
#include "csusy/pipeline.hpp"
#include "csusy/quadrature.hpp"
#include "csusy/sampled.hpp"
#include "csusy/specfun.hpp"
#include "csusy/spectral.hpp"
#include "csusy/transform.hpp"
#include "csusy/wronskian.hpp"
