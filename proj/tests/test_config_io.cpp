#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <string>

#include "blockavg/config_io.hpp"

using namespace blockavg;
using nlohmann::json;

TEST_CASE("parses a geometric config") {
    const json doc = json::parse(R"({
        "partition": {"kind": "geometric", "base": 4, "blocks": 8},
        "p": 2,
        "norming": {"kind": "root-of-boundary"}
    })");
    const AveragingConfig cfg = parse_config(doc);
    CHECK(cfg.partition.stored_blocks() == 8);
    CHECK(cfg.partition.boundary(8) == 65536);
    CHECK(cfg.partition.extension().kind == ExtensionKind::geometric);
    CHECK(cfg.exponents.q == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(cfg.norming.kind() == NormingScheme::Kind::root_of_boundary);
    CHECK(cfg.weights.kind() == WeightScheme::Kind::constant_one); // default
}

TEST_CASE("parses lacunary, singleton, and explicit partitions") {
    const AveragingConfig lac = parse_config(json::parse(R"({
        "partition": {"kind": "lacunary", "boundaries": [3, 9, 27, 81],
                      "extension": {"kind": "geometric", "base": 3}},
        "p": 1.5
    })"));
    CHECK(lac.partition.block_lengths() == std::vector<std::int64_t>{3, 6, 18, 54});
    CHECK(lac.partition.extension().base == 3);
    CHECK(lac.norming.kind() == NormingScheme::Kind::derived); // default

    const AveragingConfig single = parse_config(json::parse(R"({
        "partition": {"kind": "singleton", "blocks": 64},
        "p": 2,
        "norming": {"kind": "power", "alpha": 2}
    })"));
    CHECK(single.partition.stored_blocks() == 64);
    CHECK(single.norming.alpha() == 2.0);

    const AveragingConfig expl = parse_config(json::parse(R"({
        "partition": {"kind": "explicit", "block_lengths": [2, 3, 5]},
        "weights": {"kind": "explicit", "values": [1, 1, 2, 2, 3, 3, 4, 4, 5, 5]},
        "p": 3
    })"));
    CHECK(expl.partition.boundaries() == std::vector<std::int64_t>{2, 5, 10});
    CHECK(expl.weights.value(3) == 2.0);
}

TEST_CASE("parses weight schemes") {
    const AveragingConfig geo = parse_config(json::parse(R"({
        "partition": {"kind": "singleton", "blocks": 8},
        "weights": {"kind": "geometric", "scale": 1.0, "ratio": 1.15},
        "p": 2
    })"));
    CHECK(geo.weights.kind() == WeightScheme::Kind::geometric);
    CHECK(geo.weights.ratio() == 1.15);
}

TEST_CASE("rejects malformed documents with a named field") {
    auto fails_with = [](const char* text, const char* fragment) {
        try {
            parse_config(json::parse(text));
            FAIL_CHECK("expected bad_config for: " << text);
        } catch (const error& e) {
            CHECK(e.code() == errc::bad_config);
            CHECK(std::string(e.what()).find(fragment) != std::string::npos);
        }
    };

    fails_with(R"({"p": 2})", "partition");
    fails_with(R"({"partition": {"kind": "geometric", "base": 4, "blocks": 2}})", "p");
    fails_with(R"({"partition": {"kind": "ring", "blocks": 2}, "p": 2})", "kind");
    fails_with(R"({"partition": {"kind": "geometric", "base": 4, "blocks": 2}, "p": 2,
                   "extra": 1})",
               "extra");
    fails_with(R"({"partition": {"kind": "geometric", "base": 4, "blocks": 2, "len": 9},
                   "p": 2})",
               "len");
    fails_with(R"({"partition": {"kind": "geometric", "base": 4, "blocks": 2},
                   "weights": {"kind": "geometric", "scale": 1}, "p": 2})",
               "ratio");
    fails_with(R"({"partition": {"kind": "geometric", "base": 4, "blocks": 2}, "p": 1})", "p");
    fails_with(R"({"partition": {"kind": "geometric", "base": 4, "blocks": 2},
                   "norming": {"kind": "power"}, "p": 2})",
               "alpha");
    fails_with(R"({"partition": {"kind": "geometric", "base": 4.5, "blocks": 2}, "p": 2})",
               "base");
}

TEST_CASE("precondition failures surface as library errors, not bad_config") {
    CHECK_THROWS_AS(parse_config(json::parse(
                        R"({"partition": {"kind": "geometric", "base": 1, "blocks": 2}, "p": 2})")),
                    error);
    CHECK_THROWS_AS(parse_config(json::parse(
                        R"({"partition": {"kind": "lacunary", "boundaries": [9, 3]}, "p": 2})")),
                    error);
}

TEST_CASE("load_config rejects missing files and invalid JSON") {
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), error);
}

TEST_CASE("config ids are deterministic and distinguish configs") {
    const AveragingConfig a = parse_config(json::parse(R"({
        "partition": {"kind": "geometric", "base": 4, "blocks": 8},
        "p": 2, "norming": {"kind": "root-of-boundary"}
    })"));
    const AveragingConfig b = parse_config(json::parse(R"({
        "partition": {"kind": "geometric", "base": 4, "blocks": 8},
        "p": 2, "norming": {"kind": "derived"}
    })"));
    CHECK(config_id(a) == config_id(a));
    CHECK(config_id(a) != config_id(b));
    CHECK(config_id(a) == "geo4-K8-n65536-m1-p2-Mroot");
}

TEST_CASE("report serialization") {
    const BoundReport bound{1.5, 48, 2.5e-13, true};
    const json bj = to_json(bound);
    CHECK(bj["constant"] == 1.5);
    CHECK(bj["truncation_level"] == 48);
    CHECK(bj["tail_bound"] == 2.5e-13);
    CHECK(bj["converged"] == true);

    const VerificationReport rep{1.0, 2.0, 3.0, 5.0, true};
    const json rj = to_json(rep);
    CHECK(rj["lhs"] == 1.0);
    CHECK(rj["rhs_norm"] == 2.0);
    CHECK(rj["bound_constant"] == 3.0);
    CHECK(rj["slack"] == 5.0);
    CHECK(rj["holds"] == true);
}

TEST_CASE("floats render with 17 significant digits") {
    CHECK(format_float(2.0) == "2");
    CHECK(format_float(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_float(std::sqrt(3.0)) == "1.7320508075688772");
}
