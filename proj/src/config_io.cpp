#include "blockavg/config_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

namespace blockavg {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& what) { throw error(errc::bad_config, what); }

void reject_unknown(const json& obj, const char* where, std::initializer_list<const char*> allowed) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed) {
            if (it.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            fail(std::string("unknown field \"") + it.key() + "\" in " + where);
        }
    }
}

const json& require(const json& obj, const char* key, const char* where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        fail(std::string("missing field \"") + key + "\" in " + where);
    }
    return *it;
}

std::int64_t as_int(const json& v, const char* name) {
    if (!v.is_number_integer()) {
        fail(std::string("field \"") + name + "\" must be an integer");
    }
    return v.get<std::int64_t>();
}

double as_number(const json& v, const char* name) {
    if (!v.is_number()) {
        fail(std::string("field \"") + name + "\" must be a number");
    }
    return v.get<double>();
}

std::string as_string(const json& v, const char* name) {
    if (!v.is_string()) {
        fail(std::string("field \"") + name + "\" must be a string");
    }
    return v.get<std::string>();
}

ExtensionRule parse_extension(const json& doc) {
    if (!doc.is_object()) {
        fail("\"extension\" must be an object");
    }
    reject_unknown(doc, "extension", {"kind", "base"});
    const std::string kind = as_string(require(doc, "kind", "extension"), "kind");
    if (kind == "geometric") {
        return ExtensionRule{ExtensionKind::geometric, as_int(require(doc, "base", "extension"), "base")};
    }
    if (kind == "singleton") {
        return ExtensionRule{ExtensionKind::singleton, 0};
    }
    fail("extension kind must be \"geometric\" or \"singleton\"");
}

Partition parse_partition(const json& doc) {
    if (!doc.is_object()) {
        fail("\"partition\" must be an object");
    }
    const std::string kind = as_string(require(doc, "kind", "partition"), "kind");
    if (kind == "geometric") {
        reject_unknown(doc, "partition", {"kind", "base", "blocks"});
        return geometric_partition(as_int(require(doc, "base", "partition"), "base"),
                                   as_int(require(doc, "blocks", "partition"), "blocks"));
    }
    if (kind == "singleton") {
        reject_unknown(doc, "partition", {"kind", "blocks"});
        return singleton_partition(as_int(require(doc, "blocks", "partition"), "blocks"));
    }
    if (kind == "lacunary") {
        reject_unknown(doc, "partition", {"kind", "boundaries", "extension"});
        const json& arr = require(doc, "boundaries", "partition");
        if (!arr.is_array()) {
            fail("\"boundaries\" must be an array of integers");
        }
        std::vector<std::int64_t> boundaries;
        for (const json& v : arr) {
            boundaries.push_back(as_int(v, "boundaries"));
        }
        ExtensionRule ext;
        if (doc.contains("extension")) {
            ext = parse_extension(doc["extension"]);
        }
        return lacunary_partition(boundaries, ext).first;
    }
    if (kind == "explicit") {
        reject_unknown(doc, "partition", {"kind", "block_lengths", "extension"});
        const json& arr = require(doc, "block_lengths", "partition");
        if (!arr.is_array()) {
            fail("\"block_lengths\" must be an array of integers");
        }
        std::vector<std::int64_t> lengths;
        for (const json& v : arr) {
            lengths.push_back(as_int(v, "block_lengths"));
        }
        ExtensionRule ext;
        if (doc.contains("extension")) {
            ext = parse_extension(doc["extension"]);
        }
        return Partition(std::move(lengths), ext);
    }
    fail("partition kind must be one of \"geometric\", \"lacunary\", \"singleton\", \"explicit\"");
}

WeightScheme parse_weights(const json& doc) {
    if (!doc.is_object()) {
        fail("\"weights\" must be an object");
    }
    const std::string kind = as_string(require(doc, "kind", "weights"), "kind");
    if (kind == "constant-one") {
        reject_unknown(doc, "weights", {"kind"});
        return WeightScheme::constant_one();
    }
    if (kind == "explicit") {
        reject_unknown(doc, "weights", {"kind", "values"});
        const json& arr = require(doc, "values", "weights");
        if (!arr.is_array()) {
            fail("\"values\" must be an array of numbers");
        }
        std::vector<double> values;
        for (const json& v : arr) {
            values.push_back(as_number(v, "values"));
        }
        return WeightScheme::explicit_list(std::move(values));
    }
    if (kind == "geometric") {
        reject_unknown(doc, "weights", {"kind", "scale", "ratio"});
        return WeightScheme::geometric(as_number(require(doc, "scale", "weights"), "scale"),
                                       as_number(require(doc, "ratio", "weights"), "ratio"));
    }
    fail("weights kind must be one of \"constant-one\", \"explicit\", \"geometric\"");
}

NormingScheme parse_norming(const json& doc) {
    if (!doc.is_object()) {
        fail("\"norming\" must be an object");
    }
    const std::string kind = as_string(require(doc, "kind", "norming"), "kind");
    if (kind == "derived") {
        reject_unknown(doc, "norming", {"kind"});
        return NormingScheme::derived();
    }
    if (kind == "power") {
        reject_unknown(doc, "norming", {"kind", "alpha"});
        return NormingScheme::power(as_number(require(doc, "alpha", "norming"), "alpha"));
    }
    if (kind == "root-of-boundary") {
        reject_unknown(doc, "norming", {"kind"});
        return NormingScheme::root_of_boundary();
    }
    fail("norming kind must be one of \"derived\", \"power\", \"root-of-boundary\"");
}

} // namespace

AveragingConfig parse_config(const json& doc) {
    if (!doc.is_object()) {
        fail("config document must be a JSON object");
    }
    reject_unknown(doc, "config", {"partition", "weights", "p", "norming"});
    Partition partition = parse_partition(require(doc, "partition", "config"));
    WeightScheme weights =
        doc.contains("weights") ? parse_weights(doc["weights"]) : WeightScheme::constant_one();
    const double p = as_number(require(doc, "p", "config"), "p");
    ExponentPair exponents = [&] {
        try {
            return ExponentPair::from_p(p);
        } catch (const error& e) {
            fail(std::string("field \"p\": ") + e.what());
        }
    }();
    NormingScheme norming =
        doc.contains("norming") ? parse_norming(doc["norming"]) : NormingScheme::derived();
    return AveragingConfig(std::move(partition), std::move(weights), exponents, norming);
}

AveragingConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        fail("cannot open config file: " + path.string());
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        fail(std::string("config is not valid JSON: ") + e.what());
    }
    return parse_config(doc);
}

std::string config_id(const AveragingConfig& config) {
    std::ostringstream out;
    const Partition& part = config.partition;
    switch (part.extension().kind) {
    case ExtensionKind::geometric:
        out << "geo" << part.extension().base;
        break;
    case ExtensionKind::singleton:
        out << "single";
        break;
    case ExtensionKind::none:
        out << "fixed";
        break;
    }
    out << "-K" << part.stored_blocks() << "-n" << part.boundaries().back();
    switch (config.weights.kind()) {
    case WeightScheme::Kind::constant_one:
        out << "-m1";
        break;
    case WeightScheme::Kind::geometric:
        out << "-mgeo" << format_float(config.weights.ratio());
        break;
    case WeightScheme::Kind::explicit_list:
        out << "-mlist" << config.weights.values().size();
        break;
    }
    out << "-p" << format_float(config.exponents.p);
    switch (config.norming.kind()) {
    case NormingScheme::Kind::derived:
        out << "-Mcum";
        break;
    case NormingScheme::Kind::power:
        out << "-Mpow" << format_float(config.norming.alpha());
        break;
    case NormingScheme::Kind::root_of_boundary:
        out << "-Mroot";
        break;
    }
    return out.str();
}

nlohmann::json to_json(const BoundReport& report) {
    return json{{"constant", report.constant},
                {"truncation_level", report.truncation_level},
                {"tail_bound", report.tail_bound},
                {"converged", report.converged}};
}

nlohmann::json to_json(const VerificationReport& report) {
    return json{{"lhs", report.lhs},
                {"rhs_norm", report.rhs_norm},
                {"bound_constant", report.bound_constant},
                {"slack", report.slack},
                {"holds", report.holds}};
}

std::string format_float(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

} // namespace blockavg
