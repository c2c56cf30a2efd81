#include "fairmit/exposure.hpp"

namespace fairmit {

ImpactTable accumulate_impacts(const std::vector<std::vector<double>>& counts_mis,
                               const std::vector<std::vector<double>>& counts_true,
                               const Matrix& influence, std::size_t upto) {
    const std::size_t n = influence.size();
    if (counts_mis.size() != counts_true.size())
        throw std::invalid_argument("accumulate_impacts: realization count mismatch");
    if (upto >= counts_mis.size())
        throw std::invalid_argument("accumulate_impacts: upto beyond available realizations");

    std::vector<double> total_mis(n, 0.0), total_true(n, 0.0);
    for (std::size_t s = 0; s <= upto; ++s) {
        if (counts_mis[s].size() != n || counts_true[s].size() != n)
            throw std::invalid_argument("accumulate_impacts: count vector dimension mismatch");
        for (std::size_t j = 0; j < n; ++j) {
            total_mis[j] += counts_mis[s][j];
            total_true[j] += counts_true[s][j];
        }
    }

    ImpactTable table;
    table.realization_index = upto;
    table.mis_impact.assign(n, 0.0);
    table.true_impact.assign(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        if (influence[i].size() != n)
            throw std::invalid_argument("accumulate_impacts: influence is not square");
        for (std::size_t j = 0; j < n; ++j) {
            double a = (i == j) ? 1.0 : influence[i][j];
            if (a == 0.0) continue;
            table.mis_impact[i] += a * total_mis[j];
            table.true_impact[i] += a * total_true[j];
        }
    }
    return table;
}

ExposureRatios ratio(const ImpactTable& impacts, double balance) {
    if (balance <= 0.0) throw std::invalid_argument("ratio: balance must be positive");
    ExposureRatios out;
    out.balance = balance;
    out.r.reserve(impacts.mis_impact.size());
    for (std::size_t i = 0; i < impacts.mis_impact.size(); ++i)
        out.r.push_back((1.0 + impacts.true_impact[i]) /
                        ((1.0 + impacts.mis_impact[i]) * balance));
    return out;
}

}  // namespace fairmit
