#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>

#include "support.hpp"

using namespace qcluster;
using qtest::qe;

namespace {

std::string sample(const std::string& name) { return std::string(QCLUSTER_SAMPLES_DIR) + "/" + name; }

json example_json() { return read_json_file(sample("example_sigma.json")); }

} // namespace

TEST(Io, SampleLoadsAsTheExample) {
    const LoadResult res = load_seed(sample("example_sigma.json"));
    ASSERT_TRUE(res.ok()) << res.report.str();
    EXPECT_EQ(*res.seed, qtest::example_sigma());
    const LoadResult res2 = load_seed(sample("example_sigma_prime.json"));
    ASSERT_TRUE(res2.ok());
    EXPECT_EQ(*res2.seed, qtest::example_sigma_prime());
}

TEST(Io, RoundTripInitialAndMutated) {
    std::vector<Seed> seeds{qtest::example_sigma(), build_gr_seed(3, 6)};
    seeds.push_back(mutate_along(seeds[0], {Label{2}}));
    seeds.push_back(mutate_along(seeds[1], {Label{1, 1}, Label{2, 2}, Label{1, 2}}));
    for (const auto& s : seeds) {
        const LoadResult back = seed_from_json(json::parse(seed_to_string(s)));
        ASSERT_TRUE(back.ok()) << back.report.str();
        EXPECT_EQ(*back.seed, s);
        EXPECT_EQ(back.seed->names(), s.names());
        EXPECT_EQ(seed_to_json(*back.seed), seed_to_json(s));
    }
}

TEST(Io, SaveAndLoadFile) {
    const auto path = std::filesystem::temp_directory_path() / "qcluster_io_test.json";
    const Seed s = mutate_seed(build_gr_seed(2, 5), Label{1, 1});
    save_seed(s, path.string());
    const LoadResult back = load_seed(path.string());
    std::filesystem::remove(path);
    ASSERT_TRUE(back.ok());
    EXPECT_EQ(*back.seed, s);
}

TEST(Io, CorruptedRIsReportedByName) {
    json j = example_json();
    j["r"].push_back({2, 1, 1, {4}});
    const LoadResult res = seed_from_json(j);
    EXPECT_FALSE(res.ok());
    EXPECT_FALSE(res.report.passed("r_skew_symmetry"));
    const auto* c = res.report.find("r_skew_symmetry");
    ASSERT_NE(c, nullptr);
    EXPECT_NE(c->detail.find("(1, 2)"), std::string::npos) << c->detail;
}

TEST(Io, NonUnitCoefficientIsReported) {
    json j = example_json();
    j["r"][0][2] = 3;
    const LoadResult res = seed_from_json(j);
    EXPECT_FALSE(res.report.passed("r_values"));
}

TEST(Io, ValidationFailuresSurface) {
    json j = example_json();
    j["G"] = {{1}, {1}, {0}};
    const LoadResult res = seed_from_json(j);
    ASSERT_TRUE(res.seed.has_value());
    EXPECT_FALSE(res.ok());
    EXPECT_FALSE(res.report.passed("grading"));
    json k = example_json();
    k["B"].push_back({1, 9, 1});
    EXPECT_FALSE(seed_from_json(k).report.passed("B_labels"));
}

TEST(Io, MalformedInputIsAParseError) {
    json j = example_json();
    j["G"] = {{1}, {1}};
    EXPECT_THROW(seed_from_json(j), ParseError);
    json k = example_json();
    k["schema_version"] = 2;
    EXPECT_THROW(seed_from_json(k), ParseError);
    json l = example_json();
    l["labels"] = {1, 1, 2};
    EXPECT_THROW(seed_from_json(l), ParseError);
    EXPECT_THROW(seed_from_json(json::array()), ParseError);
    EXPECT_THROW(read_json_file(sample("does_not_exist.json")), ParseError);
}

TEST(Io, ExpressionParser) {
    const Seed s = qtest::example_sigma();
    for (const std::string text : {"q*x1*x2^-1*x3 + x2^-1", "x1*x2", "q^-1*x1*x2", "-2*x3^2 + q^(1/2)", "1"}) {
        const TorusElement t = parse_element(text, s.r(), s.params());
        EXPECT_EQ(format_element(t, s.r(), s.params()), text);
    }
    // Products are taken in the order written.
    const TorusElement a = parse_element("x2*x1", s.r(), s.params());
    const TorusElement b = parse_element("q^-2*x1*x2", s.r(), s.params());
    EXPECT_EQ(a, b);
    EXPECT_THROW(parse_element("x1 +", s.r(), s.params()), ParseError);
    EXPECT_THROW(parse_element("x7", s.r(), s.params()), Error);
    EXPECT_EQ(parse_scalar("q + q^-1", s.params()), CoeffPoly::monomial(1, qe(2)) + CoeffPoly::monomial(1, qe(-2)));
    EXPECT_THROW(parse_scalar("x1", s.params()), ParseError);
}

TEST(Io, MorphismFile) {
    const MorphismSpec f = morphism_from_json(read_json_file(sample("example_f.json")), qtest::example_sigma(),
                                              qtest::example_sigma_prime());
    EXPECT_EQ(f.var_map(), qtest::example_f().var_map());
    EXPECT_THROW(morphism_from_json(json::parse(R"({"map":[{"from":1}]})"), f.source(), f.target()), ParseError);
}

TEST(Io, DotExport) {
    const std::string dot = seed_to_dot(build_gr_seed(2, 4));
    EXPECT_NE(dot.find("\"(1,1)\" [label=\"13\", xlabel=\"1\"]"), std::string::npos) << dot;
    EXPECT_NE(dot.find("\"(0,0)\" [label=\"12\", shape=box"), std::string::npos);
    EXPECT_NE(dot.find("\"(0,0)\" -> \"(1,1)\""), std::string::npos);
    EXPECT_EQ(dot.find("\"(1,1)\" -> \"(0,0)\""), std::string::npos);
}
