#pragma once

#include "params.hpp"
#include "poly.hpp"
#include "gamma.hpp"
#include "coeffs.hpp"
#include "hyp.hpp"
#include "quadrature.hpp"
#include "h_function.hpp"
#include "verify.hpp"
