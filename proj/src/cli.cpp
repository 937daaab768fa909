#include "pathint/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>

#include "pathint/errors.hpp"
#include "pathint/fluctuation.hpp"
#include "pathint/kernels.hpp"

namespace pathint {

namespace {

bool constant_curves(const HullWhiteParams& p) {
    return p.sigma.is_constant() && p.theta.is_constant() && p.alpha.is_constant();
}

MappedModel as_mapped(const HullWhiteParams& p, const PriceQuery& q) {
    if (!constant_curves(p))
        throw DomainError("semiclassical pricing needs constant Hull-White curves");
    return MappedModel::hull_white_equivalent(p.alpha(q.t), p.theta(q.t), p.sigma(q.t),
                                              q.z > 0.0 ? q.z : 1.0);
}

// A linear mapped model is Hull-White with sigma_r = r0 k sigma, theta_r = r0 k theta + alpha r0.
std::optional<HullWhiteParams> as_hull_white(const MappedModel& m) {
    if (m.map.kind() != RateMap::Kind::linear) return std::nullopt;
    const double k = m.r0 * m.map.slope();
    return HullWhiteParams::constant(m.alpha, k * m.theta + m.alpha * m.r0, std::abs(k) * m.sigma);
}

SemiclassicalOptions semi_options(const Knobs& k) {
    SemiclassicalOptions o;
    o.quad_nodes = k.quad_nodes;
    o.grid_points = k.grid_points;
    return o;
}

template <class M>
PdeConfig pde_config(const M& m, const PriceQuery& q, const Knobs& k) {
    PdeConfig c = default_pde_config(m, q);
    if (k.pde_nz) c.n_z = k.pde_nz;
    if (k.pde_nt) c.n_t = k.pde_nt;
    return c;
}

[[noreturn]] void unsupported(Method m, const AnyModel& model) {
    throw DomainError("method '" + to_string(m) + "' is not available for " + model_family(model) +
                      " models");
}

}  // namespace

std::vector<Method> methods_for(const AnyModel& model) {
    switch (model.index()) {
        case 0: {
            std::vector<Method> out{Method::exact};
            if (constant_curves(std::get<0>(model)) && std::get<0>(model).sigma(0.0) > 0.0)
                out.push_back(Method::semiclassical);
            out.push_back(Method::mc);
            out.push_back(Method::pde);
            return out;
        }
        case 1: {
            const MappedModel& m = std::get<1>(model);
            std::vector<Method> out;
            if (as_hull_white(m)) out.push_back(Method::exact);
            out.push_back(Method::semiclassical);
            out.push_back(Method::mc);
            const bool quad_ok = m.map.kind() == RateMap::Kind::quadratic &&
                                 std::abs(m.theta + m.alpha * m.map.b() / (2.0 * m.map.a())) <=
                                     1e-12 * (1.0 + std::abs(m.theta));
            if (m.map.kind() == RateMap::Kind::linear || m.map.kind() == RateMap::Kind::exponential ||
                quad_ok)
                out.push_back(Method::pde);
            return out;
        }
        default:
            return {Method::semiclassical, Method::lattice};
    }
}

PriceResult price_with(const AnyModel& model, Method method, const PriceQuery& q, const Knobs& k) {
    if (const auto* hw = std::get_if<HullWhiteParams>(&model)) {
        switch (method) {
            case Method::exact: return price_hull_white_exact(*hw, q);
            case Method::semiclassical: {
                if (q.T == q.t) return make_price_result(1.0, q, Method::semiclassical);
                return price_semiclassical(as_mapped(*hw, q), q, semi_options(k));
            }
            case Method::mc: return mc_price(*hw, q, k.mc);
            case Method::pde:
                if (q.T == q.t) return make_price_result(1.0, q, Method::pde);
                return pde_price(*hw, q, pde_config(*hw, q, k));
            default: unsupported(method, model);
        }
    }
    if (const auto* m = std::get_if<MappedModel>(&model)) {
        switch (method) {
            case Method::exact: {
                const auto hw = as_hull_white(*m);
                if (!hw) unsupported(method, model);
                PriceResult r = price_hull_white_exact(*hw, q);
                return r;
            }
            case Method::semiclassical: return price_semiclassical(*m, q, semi_options(k));
            case Method::mc: return mc_price(*m, q, k.mc);
            case Method::pde:
                if (q.T == q.t) return make_price_result(1.0, q, Method::pde);
                return pde_price(*m, q, pde_config(*m, q, k));
            default: unsupported(method, model);
        }
    }
    const auto& pm = std::get<PotentialModel>(model);
    switch (method) {
        case Method::semiclassical: return price_potential_model(pm, q, semi_options(k));
        case Method::lattice: {
            LatticeConfig c = default_lattice_config(0.0, q.t, std::max(q.T, q.t + 1e-12), k.lattice_slices);
            return lattice_price(pm, q, c);
        }
        default: unsupported(method, model);
    }
}

// ------------------------------------------------------------ golden suite

std::vector<CheckRow> golden_suite(const std::optional<ModelSpec>& model, const PriceQuery& q,
                                   const Knobs& k) {
    std::vector<CheckRow> rows;
    auto add = [&](std::string name, double measured, double tol, std::string detail = {}) {
        rows.push_back({std::move(name), measured, tol, measured <= tol && std::isfinite(measured),
                        std::move(detail)});
    };
    auto guarded = [&](const std::string& name, double tol, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            rows.push_back({name, std::nan(""), tol, false, e.what()});
        }
    };

    // Gaussian expectations on (0, 0; 0, 1).
    const Potential ho{[](double x, double) { return 0.5 * x * x; }, [](double x, double) { return x; },
                       [](double, double) { return 1.0; }, true};
    const ScalarField ho_v = ho.value;
    const ScalarField zero = [](double, double) { return 0.0; };
    const DriftWeight unit_rho{[](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                               [](double, double) { return 0.0; }};
    KernelQuery kq;
    kq.omega = 1.0;
    const double ho1 = ho_kernel_fixed(kq);
    const double ho2 = ho_kernel_free(kq);
    KernelQuery kr;
    kr.rho = PiecewiseLinearCurve::constant(1.0);
    const double explin = drift_expectation(kr, false);
    LatticeConfig lc = default_lattice_config(0.0, 0.0, 1.0, 64);

    guarded("kernel_ho_fixed_lattice", 1e-4, [&] {
        const double v = lattice_expectation_extrapolated(std::nullopt, ho_v, 0, 0, 0.0, 1, lc, true).value;
        add("kernel_ho_fixed_lattice", std::abs(v - ho1), 1e-4, "value=" + format_double(v));
    });
    guarded("kernel_ho_free_lattice", 1e-4, [&] {
        const double v = lattice_expectation_extrapolated(std::nullopt, ho_v, 0, 0, std::nullopt, 1, lc, true).value;
        add("kernel_ho_free_lattice", std::abs(v - ho2), 1e-4, "value=" + format_double(v));
    });
    guarded("kernel_drift_free_lattice", 1e-4, [&] {
        const double v = lattice_expectation_extrapolated(unit_rho, zero, 0, 0, std::nullopt, 1, lc, true).value;
        add("kernel_drift_free_lattice", std::abs(v - explin), 1e-4, "value=" + format_double(v));
    });
    guarded("kernel_ho_fixed_semiclassical", 1e-8, [&] {
        const double v = conditional_expectation_semiclassical(std::nullopt, ho, 0, 0, 0, 1);
        add("kernel_ho_fixed_semiclassical", std::abs(v - ho1), 1e-8, "value=" + format_double(v));
    });
    guarded("van_vleck_harmonic", 1e-5, [&] {
        EffectiveProblem p;
        p.V = ho;
        p.y_start = 0.3;
        p.y_end = -0.2;
        const ClassicalSolution sol = solve_classical_path(p, 2049);
        const FluctuationResult fr = gelfand_yaglom(fluctuation_potential(p, sol), 0, 1, 2049);
        add("van_vleck_harmonic", van_vleck_check(p, sol, fr, van_vleck_step(p)), 1e-5,
            "1/phi=" + format_double(1.0 / fr.phi_T));
    });
    guarded("normalization_identity", 1e-8, [&] {
        const MappedModel m{0.1, 0.0, 1.0, 0.05, RateMap::exponential()};
        SemiclassicalOptions o = semi_options(k);
        o.include_rate_term = false;
        const double v = price_semiclassical(m, {0.05, 0.0, 1.0}, o).price;
        add("normalization_identity", std::abs(v - 1.0), 1e-8, "value=" + format_double(v));
    });

    if (!model || q.T <= q.t) return rows;
    const AnyModel& am = model->model;
    auto rel = [](double a, double b) { return std::abs(a - b) / std::abs(b); };
    auto vs_mc = [&](const std::string& name, const PriceResult& a, const PriceResult& mc) {
        const double se = mc.diagnostics.std_error.value_or(0.0);
        const double dev = std::abs(a.price - mc.price);
        std::string d = to_string(a.method) + "=" + format_double(a.price) + " mc=" + format_double(mc.price) +
                        " se=" + format_double(se);
        add(name, dev / std::max(se, 1e-300), 3.0, d);
    };

    std::optional<PriceResult> exact, semi, mc, pde, lat;
    const std::vector<Method> ms = methods_for(am);
    for (Method m : ms) {
        guarded(to_string(m) + "_runs", 0.0, [&] {
            PriceResult r = price_with(am, m, q, k);
            switch (m) {
                case Method::exact: exact = r; break;
                case Method::semiclassical: semi = r; break;
                case Method::mc: mc = r; break;
                case Method::pde: pde = r; break;
                case Method::lattice: lat = r; break;
            }
        });
    }
    if (exact && semi)
        add("semiclassical_vs_exact", rel(semi->price, exact->price), 1e-7,
            "semiclassical=" + format_double(semi->price) + " exact=" + format_double(exact->price));
    if (exact && mc) vs_mc("exact_vs_mc_in_se", *exact, *mc);
    if (exact && pde)
        add("pde_vs_exact", rel(pde->price, exact->price), 1e-5,
            "pde=" + format_double(pde->price) + " exact=" + format_double(exact->price));
    if (!exact && semi && mc) {
        add("semiclassical_vs_mc_rel", rel(semi->price, mc->price), 5e-3,
            "semiclassical=" + format_double(semi->price) + " mc=" + format_double(mc->price));
    }
    if (!exact && pde && mc) vs_mc("pde_vs_mc_in_se", *pde, *mc);
    if (semi && lat)
        add("semiclassical_vs_lattice_rel", rel(semi->price, lat->price), 1e-2,
            "semiclassical=" + format_double(semi->price) + " lattice=" + format_double(lat->price));
    return rows;
}

// -------------------------------------------------------------------- CLI

namespace {

struct Args {
    std::string model_path;
    std::optional<double> z;
    double t = 0.0;
    double T = 1.0;
    std::vector<double> maturities;
    std::string method = "semiclassical";
    std::string output = "json";
    Knobs knobs;
    bool no_antithetic = false;
};

PriceQuery query_for(const Args& a, const AnyModel& m, double T) {
    double z = 0.05;
    if (a.z) z = *a.z;
    else if (const auto* mm = std::get_if<MappedModel>(&m)) z = mm->r0;
    if (T < a.t) throw DomainError("maturity " + format_double(T) + " precedes t");
    return {z, a.t, T};
}

std::vector<Method> requested(const Args& a, const AnyModel& m) {
    if (a.method == "all") return methods_for(m);
    const auto parsed = method_from_string(a.method);
    if (!parsed) throw ConfigError("unknown method '" + a.method + "'");
    return {*parsed};
}

void emit(std::ostream& out, const Args& a, const std::vector<std::pair<PriceQuery, PriceResult>>& res,
          bool as_list) {
    if (a.output == "csv") {
        out << csv_header() << "\n";
        for (const auto& [q, r] : res) out << csv_row(q.T, r) << "\n";
        return;
    }
    if (!as_list && res.size() == 1) {
        out << to_json(res[0].second, res[0].first).dump(2) << "\n";
        return;
    }
    nlohmann::ordered_json j;
    j["schema"] = "1";
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& [q, r] : res) {
        nlohmann::ordered_json e = to_json(r, q);
        e.erase("schema");
        arr.push_back(std::move(e));
    }
    j["results"] = std::move(arr);
    out << j.dump(2) << "\n";
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Zero-coupon bond pricing by Euclidean path integrals", "pathint"};
    app.require_subcommand(1);
    Args a;

    auto common = [&](CLI::App* s, bool model_required) {
        auto* opt = s->add_option("--model", a.model_path, "TOML model file");
        if (model_required) opt->required();
        s->add_option("--z", a.z, "current short rate (default: r0 for mapped models, else 0.05)");
        s->add_option("--t", a.t, "valuation time in years");
        s->add_option("--quad-nodes", a.knobs.quad_nodes, "initial endpoint quadrature intervals");
        s->add_option("--grid-points", a.knobs.grid_points, "classical path grid (0 = automatic)");
        s->add_option("--paths", a.knobs.mc.n_paths, "Monte Carlo paths");
        s->add_option("--steps", a.knobs.mc.n_steps, "Monte Carlo time steps");
        s->add_option("--seed", a.knobs.mc.seed, "Monte Carlo seed");
        s->add_flag("--no-antithetic", a.no_antithetic, "disable antithetic variates");
        s->add_option("--lattice-slices", a.knobs.lattice_slices, "base lattice slices (N, 2N, 4N are run)");
        s->add_option("--pde-nz", a.knobs.pde_nz, "PDE rate nodes");
        s->add_option("--pde-nt", a.knobs.pde_nt, "PDE time steps");
        s->add_option("--output", a.output, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    CLI::App* price = app.add_subcommand("price", "price one bond");
    common(price, true);
    price->add_option("--T", a.T, "maturity in years");
    price->add_option("--method", a.method, "exact|semiclassical|mc|lattice|pde|all")
        ->check(CLI::IsMember({"exact", "semiclassical", "mc", "lattice", "pde", "all"}));

    CLI::App* curve = app.add_subcommand("curve", "price a list of maturities");
    common(curve, true);
    curve->add_option("--maturities", a.maturities, "strictly increasing maturities")->required()->delimiter(',');
    curve->add_option("--method", a.method, "exact|semiclassical|mc|lattice|pde")
        ->check(CLI::IsMember({"exact", "semiclassical", "mc", "lattice", "pde"}));

    CLI::App* validate = app.add_subcommand("validate", "run the golden validation suite");
    common(validate, false);
    validate->add_option("--T", a.T, "maturity in years");

    CLI::App* oracle = app.add_subcommand("oracle", "run a single oracle");
    common(oracle, true);
    oracle->add_option("--T", a.T, "maturity in years");
    oracle->add_option("--method", a.method, "mc|lattice|pde")->required()
        ->check(CLI::IsMember({"mc", "lattice", "pde"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }
    a.knobs.mc.antithetic = !a.no_antithetic;

    try {
        std::optional<ModelSpec> spec;
        if (!a.model_path.empty()) spec = load_model_file(a.model_path);

        if (*validate) {
            const AnyModel dummy = HullWhiteParams::constant(1, 0, 0);
            const PriceQuery q = query_for(a, spec ? spec->model : dummy, a.T);
            const std::vector<CheckRow> rows = golden_suite(spec, q, a.knobs);
            if (a.output == "csv") out << checks_csv(rows);
            else out << checks_json(rows).dump(2) << "\n";
            return std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; }) ? 0 : 1;
        }

        const AnyModel& model = spec->model;
        if (*curve) {
            for (std::size_t i = 1; i < a.maturities.size(); ++i)
                if (!(a.maturities[i] > a.maturities[i - 1]))
                    throw ConfigError("maturities must be strictly increasing");
            const auto m = requested(a, model).front();
            std::vector<std::pair<PriceQuery, PriceResult>> res;
            for (double T : a.maturities) {
                const PriceQuery q = query_for(a, model, T);
                res.emplace_back(q, price_with(model, m, q, a.knobs));
            }
            emit(out, a, res, true);
            return 0;
        }

        const PriceQuery q = query_for(a, model, a.T);
        std::vector<std::pair<PriceQuery, PriceResult>> res;
        for (Method m : requested(a, model)) res.emplace_back(q, price_with(model, m, q, a.knobs));
        emit(out, a, res, a.method == "all");
        return 0;
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace pathint
