#pragma once

#include "brody/algebra.hpp"
#include "brody/classify.hpp"
#include "brody/complex.hpp"
#include "brody/divisor.hpp"
#include "brody/divisors.hpp"
#include "brody/error.hpp"
#include "brody/expr.hpp"
#include "brody/nevanlinna.hpp"
#include "brody/products.hpp"
#include "brody/spherical.hpp"
