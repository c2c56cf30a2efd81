#include "fairmit/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fairmit {

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw std::runtime_error("write failed for " + path);
}

std::string format_timestamp(double t) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(6);
    os << t;
    return os.str();
}

std::string events_csv(const std::vector<Event>& events) {
    std::ostringstream os;
    os << "user_id,timestamp,content\n";
    for (const Event& e : events)
        os << e.user_id << ',' << format_timestamp(e.timestamp) << ',' << content_tag(e.content)
           << '\n';
    return os.str();
}

namespace {

[[noreturn]] void bad_row(std::size_t line, const std::string& what) {
    throw ParseError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

std::vector<Event> parse_events_csv(std::string_view text) {
    std::vector<Event> events;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (line.empty()) continue;
        if (line_no == 1) {
            if (line != "user_id,timestamp,content")
                throw ParseError("line 1: expected header user_id,timestamp,content");
            continue;
        }
        std::size_t c1 = line.find(',');
        std::size_t c2 = c1 == std::string_view::npos ? std::string_view::npos
                                                      : line.find(',', c1 + 1);
        if (c1 == std::string_view::npos || c2 == std::string_view::npos)
            bad_row(line_no, "expected 3 comma-separated fields");
        std::string_view f_user = line.substr(0, c1);
        std::string_view f_time = line.substr(c1 + 1, c2 - c1 - 1);
        std::string_view f_content = line.substr(c2 + 1);

        Event e;
        auto [p1, ec1] = std::from_chars(f_user.data(), f_user.data() + f_user.size(), e.user_id);
        if (ec1 != std::errc{} || p1 != f_user.data() + f_user.size())
            bad_row(line_no, "bad user_id '" + std::string(f_user) + "'");
        try {
            std::size_t used = 0;
            e.timestamp = std::stod(std::string(f_time), &used);
            if (used != f_time.size()) throw std::invalid_argument("trailing characters");
        } catch (const std::exception&) {
            bad_row(line_no, "bad timestamp '" + std::string(f_time) + "'");
        }
        if (e.timestamp < 0.0) bad_row(line_no, "negative timestamp");
        if (f_content == "mis")
            e.content = ContentType::Misinformation;
        else if (f_content == "true")
            e.content = ContentType::TrueContent;
        else
            bad_row(line_no, "unknown content tag '" + std::string(f_content) + "'");
        events.push_back(e);
    }
    return events;
}

void write_events_csv(const std::string& path, const std::vector<Event>& events) {
    write_text_file(path, events_csv(events));
}

std::vector<Event> read_events_csv(const std::string& path) {
    return parse_events_csv(read_text_file(path));
}

std::vector<Event> merge_events(const EventLog& a, const EventLog& b) {
    std::vector<Event> out;
    out.reserve(a.events.size() + b.events.size());
    std::size_t i = 0, j = 0;
    while (i < a.events.size() || j < b.events.size()) {
        bool take_a = j >= b.events.size() ||
                      (i < a.events.size() && a.events[i].timestamp <= b.events[j].timestamp);
        out.push_back(take_a ? a.events[i++] : b.events[j++]);
    }
    return out;
}

nlohmann::json model_to_json(const HawkesModel& model) {
    return {{"mu", model.mu},
            {"influence", model.influence},
            {"decay", model.decay},
            {"content", content_tag(model.content)}};
}

HawkesModel model_from_json(const nlohmann::json& doc) {
    HawkesModel model;
    try {
        model.mu = doc.at("mu").get<std::vector<double>>();
        model.influence = doc.at("influence").get<Matrix>();
        model.decay = doc.at("decay").get<double>();
        std::string tag = doc.at("content").get<std::string>();
        if (tag == "mis")
            model.content = ContentType::Misinformation;
        else if (tag == "true")
            model.content = ContentType::TrueContent;
        else
            throw ParseError("unknown content tag '" + tag + "'");
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad model JSON: ") + e.what());
    }
    try {
        model.validate();
    } catch (const std::invalid_argument& e) {
        throw ParseError(std::string("bad model JSON: ") + e.what());
    }
    return model;
}

void write_model_json(const std::string& path, const HawkesModel& model) {
    write_text_file(path, model_to_json(model).dump(2) + "\n");
}

HawkesModel read_model_json(const std::string& path) {
    nlohmann::json doc = nlohmann::json::parse(read_text_file(path), nullptr, false);
    if (doc.is_discarded()) throw ParseError("invalid JSON in " + path);
    return model_from_json(doc);
}

nlohmann::json adjacency_to_json(const Matrix& adjacency) {
    return nlohmann::json(adjacency);
}

Matrix adjacency_from_json(const nlohmann::json& doc) {
    try {
        Matrix m = doc.get<Matrix>();
        for (const auto& row : m)
            if (row.size() != m.size()) throw ParseError("adjacency matrix is not square");
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("bad adjacency JSON: ") + e.what());
    }
}

}  // namespace fairmit
