/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/units.hpp"

#include <cmath>

namespace ipred {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double linear_to_db(double linear) { return 10.0 * std::log10(linear); }

}  // namespace ipred
