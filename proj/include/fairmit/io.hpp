#ifndef FAIRMIT_IO_HPP
#define FAIRMIT_IO_HPP

#include <cstdint>
#include <string>
#include <string_view>

#include "fairmit/hawkes.hpp"
#include "json.hpp"

namespace fairmit {

// FNV-1a over bytes; used as the checkpoint content hash.
std::uint64_t fnv1a64(std::string_view bytes);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

// Event CSV: header `user_id,timestamp,content`, content in {mis,true},
// timestamps in hours with 6 decimals.
std::string events_csv(const std::vector<Event>& events);
std::vector<Event> parse_events_csv(std::string_view text);
void write_events_csv(const std::string& path, const std::vector<Event>& events);
std::vector<Event> read_events_csv(const std::string& path);

// Merge two sorted logs into one timestamp-ordered event sequence.
std::vector<Event> merge_events(const EventLog& a, const EventLog& b);

// HawkesModel JSON: {"mu": [...], "influence": [[...]], "decay": w,
// "content": "mis"|"true"}.
nlohmann::json model_to_json(const HawkesModel& model);
HawkesModel model_from_json(const nlohmann::json& doc);
void write_model_json(const std::string& path, const HawkesModel& model);
HawkesModel read_model_json(const std::string& path);

// Adjacency as a row-major JSON matrix.
nlohmann::json adjacency_to_json(const Matrix& adjacency);
Matrix adjacency_from_json(const nlohmann::json& doc);

std::string format_timestamp(double t);  // fixed, 6 decimals

}  // namespace fairmit

#endif
