/*
 * SPDX-License-Identifier: Apache-2.0
 */
#include "ipred/csv.hpp"

#include <cmath>

#include <fmt/format.h>

namespace ipred {

std::string csv_number(double x) {
  if (std::isnan(x)) return "nan";
  return fmt::format("{:.17g}", x);
}

}  // namespace ipred
