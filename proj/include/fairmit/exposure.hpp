#ifndef FAIRMIT_EXPOSURE_HPP
#define FAIRMIT_EXPOSURE_HPP

#include "fairmit/types.hpp"

namespace fairmit {

// Cumulative per-user content impacts up to a realization index.
struct ImpactTable {
    std::vector<double> mis_impact;
    std::vector<double> true_impact;
    std::size_t realization_index = 0;
};

// Smoothed, balance-adjusted true/misinformation exposure ratios.
struct ExposureRatios {
    std::vector<double> r;
    double balance = 1.0;
};

inline constexpr double kDefaultBalance = 1.3;

// Accumulate one-hop neighbor event counts into per-user impacts over
// realizations 0..upto. The influence diagonal is treated as 1 regardless of
// the matrix: a user is an influencer to itself.
ImpactTable accumulate_impacts(const std::vector<std::vector<double>>& counts_mis,
                               const std::vector<std::vector<double>>& counts_true,
                               const Matrix& influence, std::size_t upto);

// r[i] = (1 + T_i) / ((1 + F_i) * balance); the +1 smoothing keeps ratios
// positive for empty impacts.
ExposureRatios ratio(const ImpactTable& impacts, double balance);

}  // namespace fairmit

#endif
