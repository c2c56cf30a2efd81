#include "fairmit/types.hpp"

#include <algorithm>

namespace fairmit {

void EventLog::sort_events() {
    std::stable_sort(events.begin(), events.end(),
                     [](const Event& a, const Event& b) { return a.timestamp < b.timestamp; });
}

void EventLog::validate() const {
    if (horizon <= 0.0) throw std::invalid_argument("EventLog: horizon must be positive");
    if (n_users == 0) throw std::invalid_argument("EventLog: n_users must be positive");
    double prev = 0.0;
    for (const Event& e : events) {
        if (e.user_id >= n_users)
            throw std::invalid_argument("EventLog: user_id " + std::to_string(e.user_id) +
                                        " out of range");
        if (e.timestamp < 0.0 || e.timestamp > horizon)
            throw std::invalid_argument("EventLog: timestamp outside [0, horizon]");
        if (e.timestamp < prev) throw std::invalid_argument("EventLog: events not sorted");
        prev = e.timestamp;
    }
}

Matrix zero_matrix(std::size_t rows, std::size_t cols) {
    return Matrix(rows, std::vector<double>(cols, 0.0));
}

Matrix identity_matrix(std::size_t n) {
    Matrix m = zero_matrix(n, n);
    for (std::size_t i = 0; i < n; ++i) m[i][i] = 1.0;
    return m;
}

}  // namespace fairmit
