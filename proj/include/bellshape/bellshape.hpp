#pragma once

// umbrella header

#include "bellshape/bell_representation.hpp"
#include "bellshape/catalog.hpp"
#include "bellshape/errors.hpp"
#include "bellshape/exppoly.hpp"
#include "bellshape/fourier_inversion.hpp"
#include "bellshape/interval.hpp"
#include "bellshape/phi_function.hpp"
#include "bellshape/polynomial.hpp"
#include "bellshape/quadrature.hpp"
#include "bellshape/rational.hpp"
#include "bellshape/rational_function.hpp"
#include "bellshape/real.hpp"
#include "bellshape/reporting.hpp"
#include "bellshape/symbolic_value.hpp"
#include "bellshape/transforms.hpp"
