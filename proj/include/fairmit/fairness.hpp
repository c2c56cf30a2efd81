#ifndef FAIRMIT_FAIRNESS_HPP
#define FAIRMIT_FAIRNESS_HPP

#include <optional>

#include "fairmit/exposure.hpp"

namespace fairmit {

struct LossReport {
    std::vector<double> per_user;  // local losses, one per in-scope user
    double total = 0.0;
    double normalized = 0.0;  // per-term mean of min((1-R)^2, 1), in [0,1]
};

// Term set of user i's local loss: i itself plus the users i influences
// (column i of the adjacency; the diagonal keeps i in its own set).
std::vector<std::size_t> loss_terms(std::size_t user, const Matrix& adjacency);

// Sum of squared deviations (1 - R_j)^2 over user i and its adjacent users.
double local_loss(std::size_t user, const ExposureRatios& ratios, const Matrix& adjacency);

// Total fairness loss over all users, or over a sampled subset of users.
LossReport total_loss(const ExposureRatios& ratios, const Matrix& adjacency,
                      const std::optional<std::vector<std::size_t>>& subset = std::nullopt);

}  // namespace fairmit

#endif
