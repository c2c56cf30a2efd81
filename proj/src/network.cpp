#include "fairmit/network.hpp"

namespace fairmit {

void Network::validate() const {
    const std::size_t n = adjacency.size();
    if (n == 0) throw std::invalid_argument("Network: empty adjacency");
    for (std::size_t i = 0; i < n; ++i) {
        if (adjacency[i].size() != n) throw std::invalid_argument("Network: adjacency not square");
        if (adjacency[i][i] == 0.0)
            throw std::invalid_argument("Network: adjacency diagonal must be 1");
    }
    if (mis_model.n_users() != n || true_model.n_users() != n)
        throw std::invalid_argument("Network: model dimension mismatch");
    mis_model.validate();
    true_model.validate();
}

std::vector<std::vector<std::size_t>> influencer_lists(const Matrix& adjacency) {
    const std::size_t n = adjacency.size();
    std::vector<std::vector<std::size_t>> in(n);
    for (std::size_t i = 0; i < n; ++i) {
        in[i].push_back(i);
        for (std::size_t j = 0; j < n; ++j)
            if (j != i && adjacency[i][j] != 0.0) in[i].push_back(j);
    }
    return in;
}

}  // namespace fairmit
