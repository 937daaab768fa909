#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "pathint/pricing.hpp"

namespace pathint {

/// %.17g, so values survive a text round trip bit-exactly.
std::string format_double(double v);

std::string csv_header();
/// T,price,yield,method,err_estimate
std::string csv_row(double T, const PriceResult& r);
/// Std-error for MC, quadrature estimate otherwise.
double error_estimate(const PriceResult& r);

nlohmann::ordered_json to_json(const PriceResult& r, const PriceQuery& q);

struct CheckRow {
    std::string name;
    double measured = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    std::string detail;
};

std::string checks_csv(const std::vector<CheckRow>& rows);
nlohmann::ordered_json checks_json(const std::vector<CheckRow>& rows);

}  // namespace pathint
