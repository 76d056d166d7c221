#pragma once

#include "arith.hpp"
#include "classnumbers.hpp"
#include "constants.hpp"
#include "density.hpp"
#include "multfns.hpp"
#include "parallel.hpp"
#include "quadrature.hpp"
#include "rational.hpp"
#include "signcheck.hpp"
#include "traceformula.hpp"
