#include <gtest/gtest.h>

#include "dcr/error.hpp"
#include "dcr/json_extract.hpp"

using namespace dcr;
using nlohmann::json;

namespace {

bool is_parse_error(std::string_view text, JsonShape shape = JsonShape::Any) {
    try {
        extract_json(text, shape);
    } catch (const Error& e) {
        return e.code() == ErrorCode::ParseError;
    }
    return false;
}

}  // namespace

TEST(JsonExtract, RawFencedAndProseWrapped) {
    const json expected = {{"answer", {1, -1}}};
    EXPECT_EQ(extract_json(R"({"answer":[1,-1]})"), expected);
    EXPECT_EQ(extract_json("```json\n{\"answer\": [1, -1]}\n```"), expected);
    EXPECT_EQ(extract_json("Sure! Here it is:\n{\"answer\": [1, -1]}\nHope that helps."), expected);
}

TEST(JsonExtract, ShapeSelectsValue) {
    const auto text = "marks [1, 1] and details {\"a\": 1}";
    EXPECT_EQ(extract_json(text, JsonShape::Object), (json{{"a", 1}}));
    EXPECT_EQ(extract_json(text, JsonShape::Array), (json{1, 1}));
    EXPECT_EQ(extract_json(text, JsonShape::Any), (json{1, 1}));
}

TEST(JsonExtract, BracesInsideStringsDoNotConfuseMatching) {
    EXPECT_EQ(extract_json(R"(note {"reason": "a } brace and \" quote {"} tail)"), (json{{"reason", "a } brace and \" quote {"}}));
}

TEST(JsonExtract, PythonLiteralsAreAccepted) {
    EXPECT_EQ(extract_json(R"({"is_consistent": False, "x": None, "y": True, "s": "False stays"})"),
              (json{{"is_consistent", false}, {"x", nullptr}, {"y", true}, {"s", "False stays"}}));
}

TEST(JsonExtract, DamagedPayloadsNeverYieldFragments) {
    EXPECT_TRUE(is_parse_error(""));
    EXPECT_TRUE(is_parse_error("no json here"));
    EXPECT_TRUE(is_parse_error(R"({"reason": [{"sentence": "a", "reason": "b"}], "is_consistent": tr)"));
    EXPECT_TRUE(is_parse_error(R"({"reason" [{"sentence": "a", "reason": "b"}]})"));
    EXPECT_TRUE(is_parse_error(R"({"answer": [1, -1]; "x": 2})"));
    EXPECT_TRUE(is_parse_error(R"({{"answer": [1, -1]})"));
    EXPECT_TRUE(is_parse_error("[1, 2", JsonShape::Array));
}
