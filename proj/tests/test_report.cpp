#include <cmath>
#include <random>

#include "doctest.h"
#include "twistor/errors.hpp"
#include "twistor/report.hpp"

using namespace twistor;

TEST_CASE("floats use 17 significant digits") {
  CHECK(format_double(0.1) == "0.10000000000000001");
  CHECK(format_double(4.0) == "4");
  CHECK(format_double(-1.0 / 3.0) == "-0.33333333333333331");
  CHECK(format_double(INFINITY) == "inf");
  CHECK(format_double(-INFINITY) == "-inf");
  CHECK(format_double(NAN) == "nan");
}

TEST_CASE("keys are sorted and layout is fixed") {
  const Json doc{{"b", 1}, {"a", 2.5}, {"c", Json{{"z", true}, {"y", nullptr}}}};
  CHECK(to_json_text(doc) ==
        "{\n"
        "  \"a\": 2.5,\n"
        "  \"b\": 1,\n"
        "  \"c\": {\n"
        "    \"y\": null,\n"
        "    \"z\": true\n"
        "  }\n"
        "}\n");
  CHECK(to_json_text(Json::array({1, 2})) == "[1, 2]\n");
  CHECK(to_json_text(Json::object()) == "{}\n");
  CHECK(to_json_text(Json{{"m", Json::array({Json::array({1.5, 2}), Json::array()})}}) ==
        "{\n  \"m\": [\n    [1.5, 2],\n    []\n  ]\n}\n");
}

TEST_CASE("strings are escaped") {
  CHECK(to_json_text(Json("a\"b\\c\n\t\x01")) == "\"a\\\"b\\\\c\\n\\t\\u0001\"\n");
}

TEST_CASE("doubles round-trip through the text") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> e(-300, 300);
  Json arr = Json::array();
  std::vector<double> values;
  for (int i = 0; i < 500; ++i) {
    values.push_back(u(rng) * std::pow(10.0, e(rng)));
    arr.push_back(values.back());
  }
  const Json back = Json::parse(to_json_text(arr));
  for (int i = 0; i < 500; ++i) CHECK(back[i].get<double>() == values[i]);
}

TEST_CASE("non-finite values stay valid JSON") {
  const Json doc{{"gap", json_number(INFINITY)}, {"raw", NAN}};
  const std::string text = to_json_text(doc);
  CHECK(text.find("\"gap\": \"inf\"") != std::string::npos);
  CHECK(text.find("\"raw\": \"nan\"") != std::string::npos);
  CHECK_NOTHROW(Json::parse(text));
}

TEST_CASE("markdown mirrors the numbers") {
  Json doc{{"command", "analyze"},
           {"tool_version", kToolVersion},
           {"summaries", Json{{"min_margin", 0.123456789}, {"rows", Json::array({Json{{"t", 0.001}}})}}},
           {"per_point",
            Json::array({Json{{"x", Json::array({0.5, 0.0})},
                              {"verdict", Json{{"class", "TamedJPlus"}, {"margin", 1.0}}}}})}};
  const std::string md = to_markdown(doc);
  CHECK(md.find("# analyze") == 0);
  CHECK(md.find("| min_margin | 0.123457 |") != std::string::npos);
  CHECK(md.find("### rows") != std::string::npos);
  CHECK(md.find("| verdict.class | verdict.margin | x |") != std::string::npos);
  CHECK(md.find("| TamedJPlus | 1 | [0.5, 0] |") != std::string::npos);
  CHECK(emit_report(doc, ReportFormat::Markdown) == md);
  CHECK(emit_report(doc, ReportFormat::Json) == to_json_text(doc));
}

TEST_CASE("block serialization") {
  CurvatureBlocks b;
  b.A = Mat3::Identity();
  b.B = Mat3::Zero();
  b.C = 2.0 * Mat3::Identity();
  b.B(0, 1) = 3.0;
  const Json j = json_blocks(b);
  CHECK(j["A"][1][1] == 1.0);
  CHECK(j["B"][0][1] == 3.0);
  CHECK(j["B"][1][0] == 0.0);
  CHECK(j["C"][2][2] == 2.0);
  CHECK(report_format_from_string("markdown") == ReportFormat::Markdown);
  CHECK_THROWS_AS(report_format_from_string("xml"), ArgumentError);
}
