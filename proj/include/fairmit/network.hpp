#ifndef FAIRMIT_NETWORK_HPP
#define FAIRMIT_NETWORK_HPP

#include "fairmit/hawkes.hpp"

namespace fairmit {

// A social network ready for a mitigation campaign: the shared adjacency,
// one fitted Hawkes model per content type, and the observed event history
// both models condition on.
struct Network {
    Matrix adjacency;  // binary, diagonal 1
    HawkesModel mis_model;
    HawkesModel true_model;
    EventLog mis_history;
    EventLog true_history;

    std::size_t n_users() const { return adjacency.size(); }
    double history_end() const { return std::max(mis_history.horizon, true_history.horizon); }
    void validate() const;
};

// In-neighbor lists (influencers) per user from the adjacency rows,
// diagonal included.
std::vector<std::vector<std::size_t>> influencer_lists(const Matrix& adjacency);

}  // namespace fairmit

#endif
