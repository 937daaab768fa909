#include "pathint/model_file.hpp"

#include <toml.hpp>

#include <fstream>
#include <sstream>

#include "pathint/errors.hpp"

namespace pathint {

namespace {

class Reader {
public:
    Reader(const toml::table& t, std::string source) : table_(t), source_(std::move(source)) {}

    [[noreturn]] void fail(const toml::node* n, const std::string& msg) const {
        const int line = n ? static_cast<int>(n->source().begin.line) : 0;
        throw ConfigError(source_ + ":" + std::to_string(line) + ": " + msg, line);
    }

    int line_of(const toml::node& n) const { return static_cast<int>(n.source().begin.line); }

    double number(const toml::table& sec, const char* key, std::optional<double> fallback = {}) const {
        const toml::node* n = sec.get(key);
        if (!n) {
            if (fallback) return *fallback;
            fail(&sec, std::string("missing key '") + key + "'");
        }
        if (auto v = n->value<double>()) return *v;
        fail(n, std::string("'") + key + "' must be a number");
    }

    std::string text(const toml::table& sec, const char* key) const {
        const toml::node* n = sec.get(key);
        if (!n) fail(&sec, std::string("missing key '") + key + "'");
        if (auto v = n->value<std::string>()) return *v;
        fail(n, std::string("'") + key + "' must be a string");
    }

    std::vector<double> numbers(const toml::node* n, const char* key) const {
        std::vector<double> out;
        if (auto v = n->value<double>()) return {*v};
        const toml::array* arr = n->as_array();
        if (!arr) fail(n, std::string("'") + key + "' must be a number or an array of numbers");
        for (const toml::node& e : *arr) {
            auto v = e.value<double>();
            if (!v) fail(&e, std::string("'") + key + "' entries must be numbers");
            out.push_back(*v);
        }
        if (out.empty()) fail(n, std::string("'") + key + "' is empty");
        return out;
    }

    void reject_unknown(const toml::table& sec, std::initializer_list<const char*> allowed) const {
        for (const auto& [k, v] : sec) {
            bool ok = false;
            for (const char* a : allowed) ok = ok || k.str() == a;
            if (!ok) fail(&v, "unknown key '" + std::string(k.str()) + "'");
        }
    }

    HullWhiteParams hull_white(const toml::table& sec) const {
        reject_unknown(sec, {"t", "sigma", "theta", "alpha"});
        std::optional<std::vector<double>> knots;
        if (const toml::node* n = sec.get("t")) knots = numbers(n, "t");
        auto curve = [&](const char* key) {
            const toml::node* n = sec.get(key);
            if (!n) fail(&sec, std::string("missing key '") + key + "'");
            std::vector<double> vals = numbers(n, key);
            if (!knots) {
                if (vals.size() != 1) fail(n, std::string("'") + key + "' needs a 't' knot array");
                return PiecewiseLinearCurve::constant(vals[0]);
            }
            if (vals.size() == 1) vals.assign(knots->size(), vals[0]);
            if (vals.size() != knots->size())
                fail(n, std::string("'") + key + "' length differs from 't'");
            try {
                return PiecewiseLinearCurve(*knots, vals);
            } catch (const Error& e) {
                fail(n, e.what());
            }
        };
        HullWhiteParams p{curve("sigma"), curve("theta"), curve("alpha")};
        try {
            p.validate();
        } catch (const Error& e) {
            fail(&sec, e.what());
        }
        return p;
    }

    MappedModel mapped(const toml::table& sec) const {
        reject_unknown(sec, {"sigma", "theta", "alpha", "r0", "map", "a", "b", "slope"});
        MappedModel m;
        m.sigma = number(sec, "sigma");
        m.theta = number(sec, "theta", 0.0);
        m.alpha = number(sec, "alpha");
        m.r0 = number(sec, "r0");
        const std::string kind = text(sec, "map");
        if (kind == "exp") {
            m.map = RateMap::exponential();
        } else if (kind == "quadratic") {
            m.map = RateMap::quadratic(number(sec, "a"), number(sec, "b", 0.0));
        } else if (kind == "linear") {
            m.map = RateMap::linear(number(sec, "slope", 1.0 / m.r0));
        } else {
            fail(sec.get("map"), "map must be \"exp\", \"quadratic\" or \"linear\"");
        }
        try {
            m.validate();
        } catch (const Error& e) {
            fail(&sec, e.what());
        }
        return m;
    }

    PotentialModel potential(const toml::table& sec) const {
        const std::string kind = text(sec, "builtin");
        if (kind == "harmonic") {
            reject_unknown(sec, {"builtin", "omega", "v0"});
            return PotentialModel::harmonic(number(sec, "omega"), number(sec, "v0", 0.0));
        }
        if (kind == "constant") {
            reject_unknown(sec, {"builtin", "value"});
            return PotentialModel::constant(number(sec, "value"));
        }
        fail(sec.get("builtin"), "builtin must be \"harmonic\" or \"constant\"");
    }

    ModelSpec run() const {
        const toml::table* found = nullptr;
        std::string which;
        for (const auto& [k, v] : table_) {
            const std::string key(k.str());
            if (key != "hull_white" && key != "mapped" && key != "potential")
                fail(&v, "unknown section '" + key + "'");
            if (found) fail(&v, "only one model section is allowed");
            found = v.as_table();
            if (!found) fail(&v, "'" + key + "' must be a table");
            which = key;
        }
        if (!found) throw ConfigError(source_ + ":1: no model section", 1);
        ModelSpec spec{HullWhiteParams::constant(0, 0, 0), source_};
        if (which == "hull_white") spec.model = hull_white(*found);
        else if (which == "mapped") spec.model = mapped(*found);
        else spec.model = potential(*found);
        return spec;
    }

private:
    const toml::table& table_;
    std::string source_;
};

}  // namespace

ModelSpec parse_model(const std::string& text, const std::string& source) {
    toml::table table;
    try {
        table = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        const int line = static_cast<int>(e.source().begin.line);
        throw ConfigError(source + ":" + std::to_string(line) + ": " + std::string(e.description()), line);
    }
    return Reader(table, source).run();
}

ModelSpec load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ":0: cannot open model file", 0);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_model(ss.str(), path);
}

std::string model_family(const AnyModel& m) {
    switch (m.index()) {
        case 0: return "hull_white";
        case 1: return "mapped";
        default: return "potential";
    }
}

}  // namespace pathint
