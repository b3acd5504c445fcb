/*
 * SPDX-License-Identifier: Apache-2.0
 */
#pragma once

#include <string>
#include <string_view>

namespace ipred {

/// Bumped whenever any CSV header below changes.
inline constexpr int kCsvSchemaVersion = 1;

inline constexpr std::string_view kPredictionCsvHeader = "slot,true_db,pred_db,ci_low_db,ci_high_db,pred_linear";
inline constexpr std::string_view kSweepCsvHeader =
    "predictor,target,achieved_analytic,achieved_empirical,slots,mean_R,unallocatable_slots";
inline constexpr std::string_view kSlotsCsvHeader =
    "slot,desired_gain,pred_interference,actual_interference,pred_sinr,actual_sinr,channel_uses,target,"
    "achieved_error,decode_failure";
inline constexpr std::string_view kPriorCsvHeader = "slot,mean_db,ci_low_db,ci_high_db,path1,path2,path3";
inline constexpr std::string_view kPanelCsvHeader = "panel,slot,true_db,mean_db,ci_low_db,ci_high_db,training";
inline constexpr std::string_view kTuneCsvHeader = "output_scale,length_scale,log_marginal_likelihood";

/// 17 significant digits, enough to round-trip any double.
std::string csv_number(double x);

}  // namespace ipred
