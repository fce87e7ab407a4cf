#include "maxode/problem.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "maxode/errors.hpp"

namespace maxode {

namespace {

std::string shortest(double v) {
    std::array<char, 40> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
    return std::string(buf.data(), res.ptr);
}

std::string indexed(const char* name, std::size_t i) {
    return std::string(name) + "[" + std::to_string(i) + "]";
}

Expr parse_field_expr(const std::string& text, const std::string& field) {
    try {
        return parse_expr(text);
    } catch (const ParseError& e) {
        throw SchemaError(field, e.what());
    }
}

} // namespace

void ProblemSpec::validate() const {
    if (m < 1) throw SchemaError("m", "state dimension must be >= 1");
    if (!(std::isfinite(T) && T > 0.0)) throw SchemaError("T", "horizon must be positive and finite");
    if (f.size() != static_cast<std::size_t>(m))
        throw SchemaError("f", "expected " + std::to_string(m) + " expressions, got " +
                                   std::to_string(f.size()));
    if (x0.size() != static_cast<std::size_t>(m))
        throw SchemaError("x0", "expected " + std::to_string(m) + " entries, got " +
                                    std::to_string(x0.size()));
    for (std::size_t i = 0; i < x0.size(); ++i)
        if (!std::isfinite(x0[i])) throw SchemaError(indexed("x0", i), "must be finite");
    const int kk = k();
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f[i].max_state_index() > m)
            throw SchemaError(indexed("f", i), "references x" + std::to_string(f[i].max_state_index()) +
                                                   " but the state dimension is " + std::to_string(m));
        if (f[i].max_max_index() > kk)
            throw SchemaError(indexed("f", i), "references m" + std::to_string(f[i].max_max_index()) +
                                                   " but only " + std::to_string(kk) +
                                                   " max functionals are defined");
    }
    for (std::size_t j = 0; j < maxima.size(); ++j) {
        if (maxima[j].references_time())
            throw SchemaError(indexed("maxima", j), "max functionals must not reference t");
        if (maxima[j].references_max())
            throw SchemaError(indexed("maxima", j), "max functionals must not reference m-variables");
        if (maxima[j].max_state_index() > m)
            throw SchemaError(indexed("maxima", j),
                              "references x" + std::to_string(maxima[j].max_state_index()) +
                                  " but the state dimension is " + std::to_string(m));
    }
}

std::string ProblemSpec::canonical() const {
    std::ostringstream out;
    out << "m=" << m << ";T=" << shortest(T) << ";x0=[";
    for (std::size_t i = 0; i < x0.size(); ++i) {
        if (i) out << ',';
        out << shortest(x0[i]);
    }
    out << "];f=[";
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (i) out << ',';
        out << f[i].str();
    }
    out << "];maxima=[";
    for (std::size_t j = 0; j < maxima.size(); ++j) {
        if (j) out << ',';
        out << maxima[j].str();
    }
    out << ']';
    return out.str();
}

std::string ProblemSpec::digest() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : canonical()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::array<char, 17> buf{};
    for (int i = 15; i >= 0; --i) {
        buf[i] = "0123456789abcdef"[h & 0xf];
        h >>= 4;
    }
    return std::string(buf.data(), 16);
}

std::string ProblemSpec::to_json_text() const {
    nlohmann::ordered_json j;
    j["m"] = m;
    j["f"] = nlohmann::ordered_json::array();
    for (const Expr& e : f) j["f"].push_back(e.str());
    j["maxima"] = nlohmann::ordered_json::array();
    for (const Expr& e : maxima) j["maxima"].push_back(e.str());
    j["x0"] = x0;
    j["T"] = T;
    return j.dump(2) + "\n";
}

ProblemSpec ProblemSpec::from_json_text(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw SchemaError("(document)", e.what());
    }
    if (!j.is_object()) throw SchemaError("(document)", "expected a JSON object");
    for (const char* key : {"m", "f", "maxima", "x0", "T"})
        if (!j.contains(key)) throw SchemaError(key, "missing required field");

    ProblemSpec spec;
    if (!j["m"].is_number_integer()) throw SchemaError("m", "expected an integer");
    spec.m = j["m"].get<int>();
    if (!j["T"].is_number()) throw SchemaError("T", "expected a number");
    spec.T = j["T"].get<double>();

    if (!j["f"].is_array()) throw SchemaError("f", "expected an array of expression strings");
    for (std::size_t i = 0; i < j["f"].size(); ++i) {
        if (!j["f"][i].is_string()) throw SchemaError(indexed("f", i), "expected a string");
        spec.f.push_back(parse_field_expr(j["f"][i].get<std::string>(), indexed("f", i)));
    }
    if (!j["maxima"].is_array()) throw SchemaError("maxima", "expected an array of expression strings");
    for (std::size_t i = 0; i < j["maxima"].size(); ++i) {
        if (!j["maxima"][i].is_string()) throw SchemaError(indexed("maxima", i), "expected a string");
        spec.maxima.push_back(parse_field_expr(j["maxima"][i].get<std::string>(), indexed("maxima", i)));
    }
    if (!j["x0"].is_array()) throw SchemaError("x0", "expected an array of numbers");
    for (std::size_t i = 0; i < j["x0"].size(); ++i) {
        if (!j["x0"][i].is_number()) throw SchemaError(indexed("x0", i), "expected a number");
        spec.x0.push_back(j["x0"][i].get<double>());
    }

    spec.validate();
    return spec;
}

ProblemSpec ProblemSpec::from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::ios_base::failure("cannot open problem file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::ios_base::failure("read failure on problem file: " + path);
    return from_json_text(buf.str());
}

} // namespace maxode
