#include "pathint/report.hpp"

#include <cmath>
#include <cstdio>

namespace pathint {

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string csv_header() { return "T,price,yield,method,err_estimate"; }

double error_estimate(const PriceResult& r) {
    if (r.diagnostics.std_error) return *r.diagnostics.std_error;
    return r.diagnostics.quad_error_estimate;
}

std::string csv_row(double T, const PriceResult& r) {
    return format_double(T) + "," + format_double(r.price) + "," + format_double(r.yield) + "," +
           to_string(r.method) + "," + format_double(error_estimate(r));
}

nlohmann::ordered_json to_json(const PriceResult& r, const PriceQuery& q) {
    nlohmann::ordered_json j;
    j["schema"] = "1";
    j["price"] = r.price;
    j["yield"] = r.yield;
    j["method"] = to_string(r.method);
    j["query"] = {{"z", q.z}, {"t", q.t}, {"T", q.T}};
    const PriceDiagnostics& d = r.diagnostics;
    nlohmann::ordered_json dj;
    dj["quad_error_estimate"] = d.quad_error_estimate;
    if (d.phi_min) dj["phi_min"] = *d.phi_min;
    if (d.phi_max) dj["phi_max"] = *d.phi_max;
    dj["roots_summed"] = d.roots_summed;
    dj["quad_nodes"] = d.quad_nodes;
    if (d.std_error) dj["std_error"] = *d.std_error;
    if (d.epsilon) dj["epsilon"] = *d.epsilon;
    dj["warnings"] = d.warnings;
    j["diagnostics"] = std::move(dj);
    return j;
}

std::string checks_csv(const std::vector<CheckRow>& rows) {
    std::string out = "check,measured,tolerance,status,detail\n";
    for (const CheckRow& c : rows)
        out += c.name + "," + format_double(c.measured) + "," + format_double(c.tolerance) + "," +
               (c.pass ? "pass" : "FAIL") + "," + c.detail + "\n";
    return out;
}

nlohmann::ordered_json checks_json(const std::vector<CheckRow>& rows) {
    nlohmann::ordered_json j;
    j["schema"] = "1";
    bool all = true;
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const CheckRow& c : rows) {
        all = all && c.pass;
        arr.push_back({{"check", c.name},
                       {"measured", c.measured},
                       {"tolerance", c.tolerance},
                       {"pass", c.pass},
                       {"detail", c.detail}});
    }
    j["passed"] = all;
    j["checks"] = std::move(arr);
    return j;
}

}  // namespace pathint
