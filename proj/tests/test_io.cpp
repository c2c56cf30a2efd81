#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>

#include "doctest.h"
#include "fairmit/io.hpp"

using namespace fairmit;

TEST_CASE("timestamps are printed with six decimals") {
    CHECK(format_timestamp(0.0) == "0.000000");
    CHECK(format_timestamp(1.5) == "1.500000");
    CHECK(format_timestamp(2.0 / 3.0) == "0.666667");
}

TEST_CASE("event CSV round trip") {
    std::vector<Event> events = {Event{0, 0.25, ContentType::Misinformation},
                                 Event{3, 0.25, ContentType::TrueContent},
                                 Event{1, 7.125, ContentType::Misinformation}};
    std::string csv = events_csv(events);
    CHECK(csv.rfind("user_id,timestamp,content\n", 0) == 0);
    std::vector<Event> parsed = parse_events_csv(csv);
    REQUIRE(parsed.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(parsed[i].user_id == events[i].user_id);
        CHECK(parsed[i].timestamp == doctest::Approx(events[i].timestamp));
        CHECK(parsed[i].content == events[i].content);
    }
}

TEST_CASE("parse errors carry line numbers") {
    CHECK_THROWS_AS(parse_events_csv("wrong,header\n"), ParseError);
    CHECK_THROWS_WITH_AS(
        parse_events_csv("user_id,timestamp,content\n0,1.0,mis\nbroken line\n"),
        doctest::Contains("line 3"), ParseError);
    CHECK_THROWS_WITH_AS(parse_events_csv("user_id,timestamp,content\n0,1.0,spam\n"),
                         doctest::Contains("line 2"), ParseError);
}

TEST_CASE("CSV tolerates CRLF and blank trailing lines") {
    std::vector<Event> parsed =
        parse_events_csv("user_id,timestamp,content\r\n2,3.500000,true\r\n\n");
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0].user_id == 2);
    CHECK(parsed[0].content == ContentType::TrueContent);
}

TEST_CASE("merge keeps global timestamp order and is stable") {
    EventLog a, b;
    a.events = {Event{0, 1.0, ContentType::Misinformation},
                Event{0, 3.0, ContentType::Misinformation}};
    b.events = {Event{1, 1.0, ContentType::TrueContent},
                Event{1, 2.0, ContentType::TrueContent}};
    auto merged = merge_events(a, b);
    REQUIRE(merged.size() == 4);
    CHECK(merged[0].user_id == 0);  // tie at t=1: first log wins
    CHECK(merged[1].user_id == 1);
    CHECK(merged[2].timestamp == doctest::Approx(2.0));
    CHECK(merged[3].timestamp == doctest::Approx(3.0));
}

TEST_CASE("model JSON round trip") {
    HawkesModel model;
    model.mu = {0.25, 0.5};
    model.influence = {{0.0, 0.125}, {0.5, 0.0}};
    model.decay = 0.7;
    model.content = ContentType::TrueContent;

    HawkesModel back = model_from_json(model_to_json(model));
    CHECK(back.mu == model.mu);
    CHECK(back.influence == model.influence);
    CHECK(back.decay == model.decay);
    CHECK(back.content == model.content);
}

TEST_CASE("malformed model JSON is a parse error") {
    CHECK_THROWS_AS(model_from_json(nlohmann::json::object()), ParseError);
    nlohmann::json bad = model_to_json(
        HawkesModel{{0.1}, {{0.0}}, 1.0, ContentType::Misinformation});
    bad["decay"] = -1.0;
    CHECK_THROWS_AS(model_from_json(bad), ParseError);
    bad = model_to_json(HawkesModel{{0.1}, {{0.0}}, 1.0, ContentType::Misinformation});
    bad["influence"] = {{0.0, 0.1}};
    CHECK_THROWS_AS(model_from_json(bad), ParseError);
}

TEST_CASE("model files round trip on disk") {
    HawkesModel model{{1.0}, {{0.3}}, 1.0, ContentType::Misinformation};
    write_model_json("io_model.json", model);
    HawkesModel back = read_model_json("io_model.json");
    CHECK(back.mu == model.mu);
    CHECK(back.influence == model.influence);
    std::remove("io_model.json");
    CHECK_THROWS(read_model_json("io_model.json"));
}

TEST_CASE("adjacency JSON round trip and shape check") {
    Matrix a = {{1.0, 0.0}, {1.0, 1.0}};
    CHECK(adjacency_from_json(adjacency_to_json(a)) == a);
    nlohmann::json ragged = {{1.0, 0.0}, {1.0}};
    CHECK_THROWS_AS(adjacency_from_json(ragged), ParseError);
}

TEST_CASE("fnv1a64 is stable and collision-averse on small edits") {
    CHECK(fnv1a64("") == 0xcbf29ce484222325ULL);
    CHECK(fnv1a64("a") != fnv1a64("b"));
    CHECK(fnv1a64("abc") == fnv1a64("abc"));
}

TEST_CASE("text file round trip preserves bytes") {
    std::string content = "line1\nline2\r\nbinary\t\xff tail";
    write_text_file("io_bytes.txt", content);
    CHECK(read_text_file("io_bytes.txt") == content);
    std::remove("io_bytes.txt");
}
