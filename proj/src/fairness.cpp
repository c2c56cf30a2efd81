#include "fairmit/fairness.hpp"

#include <algorithm>
#include <cmath>

namespace fairmit {

std::vector<std::size_t> loss_terms(std::size_t user, const Matrix& adjacency) {
    const std::size_t n = adjacency.size();
    if (user >= n) throw std::out_of_range("loss_terms: user index out of range");
    std::vector<std::size_t> terms;
    terms.push_back(user);
    for (std::size_t j = 0; j < n; ++j)
        if (j != user && adjacency[j][user] != 0.0) terms.push_back(j);
    return terms;
}

double local_loss(std::size_t user, const ExposureRatios& ratios, const Matrix& adjacency) {
    double loss = 0.0;
    for (std::size_t j : loss_terms(user, adjacency)) {
        double d = 1.0 - ratios.r[j];
        loss += d * d;
    }
    return loss;
}

LossReport total_loss(const ExposureRatios& ratios, const Matrix& adjacency,
                      const std::optional<std::vector<std::size_t>>& subset) {
    std::vector<std::size_t> scope;
    if (subset) {
        if (subset->empty()) throw std::invalid_argument("total_loss: empty subset");
        for (std::size_t i : *subset)
            if (i >= adjacency.size())
                throw std::invalid_argument("total_loss: subset index out of range");
        scope = *subset;
    } else {
        scope.resize(adjacency.size());
        for (std::size_t i = 0; i < scope.size(); ++i) scope[i] = i;
    }

    LossReport report;
    report.per_user.reserve(scope.size());
    double clamped = 0.0;
    std::size_t n_terms = 0;
    for (std::size_t i : scope) {
        double li = 0.0;
        for (std::size_t j : loss_terms(i, adjacency)) {
            double d = 1.0 - ratios.r[j];
            li += d * d;
            clamped += std::min(d * d, 1.0);
            ++n_terms;
        }
        report.per_user.push_back(li);
        report.total += li;
    }
    report.normalized = (n_terms == 0) ? 0.0 : clamped / static_cast<double>(n_terms);
    return report;
}

}  // namespace fairmit
