#ifndef FAIRMIT_TYPES_HPP
#define FAIRMIT_TYPES_HPP

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace fairmit {

enum class ContentType { Misinformation, TrueContent };

inline const char* content_tag(ContentType c) {
    return c == ContentType::Misinformation ? "mis" : "true";
}

struct Event {
    std::size_t user_id = 0;
    double timestamp = 0.0;  // hours
    ContentType content = ContentType::Misinformation;
};

// Time-ordered event record for one content type (or mixed, when ingested raw).
struct EventLog {
    std::vector<Event> events;  // sorted ascending by timestamp, stable ties
    double horizon = 0.0;       // hours
    std::size_t n_users = 0;

    bool empty() const { return events.empty(); }
    std::size_t size() const { return events.size(); }
    void sort_events();
    void validate() const;  // throws std::invalid_argument on broken invariants
};

// Discrete evaluation window [start, end), end - start = delta t.
struct Realization {
    std::size_t index = 0;
    double start = 0.0;
    double end = 0.0;

    double length() const { return end - start; }
};

struct StabilityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct IntegrityError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Matrix = std::vector<std::vector<double>>;

Matrix zero_matrix(std::size_t rows, std::size_t cols);
Matrix identity_matrix(std::size_t n);

}  // namespace fairmit

#endif
