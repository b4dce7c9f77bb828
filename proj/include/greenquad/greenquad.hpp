#pragma once

#include "greenquad/complex_rational.hpp"
#include "greenquad/diffop.hpp"
#include "greenquad/error.hpp"
#include "greenquad/hermite.hpp"
#include "greenquad/incomplete_gamma.hpp"
#include "greenquad/kernels.hpp"
#include "greenquad/matrix.hpp"
#include "greenquad/polynomial.hpp"
#include "greenquad/quadrature.hpp"
#include "greenquad/quadric.hpp"
#include "greenquad/spectral.hpp"
