/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

namespace ipred {

/// Power ratio conversions, x_linear = 10^(x_dB / 10).
double db_to_linear(double db);
double linear_to_db(double linear);

}  // namespace ipred
