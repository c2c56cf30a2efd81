#ifndef FAIRMIT_FIT_HPP
#define FAIRMIT_FIT_HPP

#include "fairmit/hawkes.hpp"

namespace fairmit {

struct FitOptions {
    int max_iterations = 10000;   // per user row
    double gradient_tol = 1e-6;   // projected gradient norm stop
};

struct FitResult {
    HawkesModel model;
    double log_likelihood = 0.0;
    int iterations = 0;    // total across rows
    bool converged = true;  // false when any row hit the iteration cap
};

// Exponential-kernel Hawkes log-likelihood of `log` under `model`.
// Uses the recursive excitation term, linear in event count.
double log_likelihood(const HawkesModel& model, const EventLog& log);

// Maximum-likelihood fit of (mu, influence) with the decay fixed a priori.
// Projected gradient ascent per target user; deterministic. Throws FitError
// on an empty log.
FitResult fit_mle(const EventLog& log, double decay, std::size_t n_users,
                  const FitOptions& options = {});

}  // namespace fairmit

#endif
