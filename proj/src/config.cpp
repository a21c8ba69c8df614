#include "rmv/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "rmv/errors.hpp"

namespace rmv {

using nlohmann::json;

Eigen::VectorXd MarketSpec::drift() const {
    switch (kind) {
        case Kind::HestonBounded: {
            Eigen::VectorXd b(1);
            b(0) = heston.b;
            return b;
        }
        case Kind::StochCorr:
            return stochcorr.b;
        case Kind::ConstantSigma:
            return constant.b;
    }
    throw ConfigError("unknown market kind");
}

int MarketSpec::n_assets() const { return static_cast<int>(drift().size()); }

AmbiguitySet AmbiguitySpec::build() const {
    switch (kind) {
        case AmbiguityKind::UncertainVolatility:
            return AmbiguitySet::uncertain_volatility(sigma_lo, sigma_hi);
        case AmbiguityKind::AmbiguousCorrelation:
            return AmbiguitySet::ambiguous_correlation(sigma1, sigma2, rho_lo, rho_hi);
        case AmbiguityKind::Custom:
            break;
    }
    throw ConfigError("ambiguity.kind: custom sets are not constructible from config files");
}

namespace {

[[noreturn]] void fail(const std::string& key, const std::string& what) {
    throw ConfigError("config key '" + key + "': " + what);
}

const json& need(const json& j, const std::string& key, const std::string& scope) {
    auto it = j.find(key);
    if (it == j.end()) fail(scope + key, "missing");
    return *it;
}

double need_number(const json& j, const std::string& key, const std::string& scope) {
    const json& v = need(j, key, scope);
    if (!v.is_number()) fail(scope + key, "expected a number");
    return v.get<double>();
}

Eigen::VectorXd need_vector(const json& j, const std::string& key, const std::string& scope) {
    const json& v = need(j, key, scope);
    if (!v.is_array() || v.empty()) fail(scope + key, "expected a non-empty array of numbers");
    Eigen::VectorXd out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number()) fail(scope + key, "expected a non-empty array of numbers");
        out(static_cast<Eigen::Index>(i)) = v[i].get<double>();
    }
    return out;
}

std::string need_string(const json& j, const std::string& key, const std::string& scope) {
    const json& v = need(j, key, scope);
    if (!v.is_string()) fail(scope + key, "expected a string");
    return v.get<std::string>();
}

MarketSpec parse_market(const json& j) {
    MarketSpec m;
    const std::string kind = need_string(j, "kind", "market.");
    if (kind == "heston_bounded") {
        m.kind = MarketSpec::Kind::HestonBounded;
        m.heston.b = need_number(j, "b", "market.");
        m.heston.kappa = need_number(j, "kappa", "market.");
        m.heston.eta = need_number(j, "eta", "market.");
        m.heston.sigma0 = need_number(j, "sigma0", "market.");
        m.heston.sigma_lo = need_number(j, "sigma_lo", "market.");
        m.heston.sigma_hi = need_number(j, "sigma_hi", "market.");
        m.heston.sigma_inf = need_number(j, "sigma_inf", "market.");
        m.heston.rho = need_number(j, "rho", "market.");
    } else if (kind == "stoch_corr") {
        m.kind = MarketSpec::Kind::StochCorr;
        const Eigen::VectorXd b = need_vector(j, "b", "market.");
        if (b.size() != 2) fail("market.b", "stoch_corr needs exactly 2 drifts");
        m.stochcorr.b = b;
        const Eigen::VectorXd sig = need_vector(j, "sigma", "market.");
        if (sig.size() != 2) fail("market.sigma", "stoch_corr needs exactly 2 marginal vols");
        m.stochcorr.sigma1 = sig(0);
        m.stochcorr.sigma2 = sig(1);
        m.stochcorr.kappa = need_number(j, "kappa", "market.");
        m.stochcorr.eta = need_number(j, "eta", "market.");
        m.stochcorr.rho0 = need_number(j, "rho0", "market.");
        m.stochcorr.rho_inf = need_number(j, "rho_inf", "market.");
        m.stochcorr.rho_hi = need_number(j, "rho_hi", "market.");
    } else if (kind == "constant_sigma") {
        m.kind = MarketSpec::Kind::ConstantSigma;
        m.constant.b = need_vector(j, "b", "market.");
        const json& rows = need(j, "sigma", "market.");
        if (!rows.is_array() || rows.empty()) fail("market.sigma", "expected a matrix");
        const auto d = static_cast<Eigen::Index>(rows.size());
        m.constant.sigma.resize(d, d);
        for (Eigen::Index r = 0; r < d; ++r) {
            const json& row = rows[static_cast<std::size_t>(r)];
            if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d)
                fail("market.sigma", "expected a square matrix");
            for (Eigen::Index c = 0; c < d; ++c) {
                const json& v = row[static_cast<std::size_t>(c)];
                if (!v.is_number()) fail("market.sigma", "expected numeric entries");
                m.constant.sigma(r, c) = v.get<double>();
            }
        }
    } else {
        fail("market.kind", "expected heston_bounded | stoch_corr | constant_sigma");
    }
    return m;
}

AmbiguitySpec parse_ambiguity(const json& j) {
    AmbiguitySpec a;
    const std::string kind = need_string(j, "kind", "ambiguity.");
    if (kind == "uncertain_volatility") {
        a.kind = AmbiguityKind::UncertainVolatility;
        a.sigma_lo = need_vector(j, "sigma_lo", "ambiguity.");
        a.sigma_hi = need_vector(j, "sigma_hi", "ambiguity.");
    } else if (kind == "ambiguous_correlation") {
        a.kind = AmbiguityKind::AmbiguousCorrelation;
        a.sigma1 = need_number(j, "sigma1", "ambiguity.");
        a.sigma2 = need_number(j, "sigma2", "ambiguity.");
        a.rho_lo = need_number(j, "rho_lo", "ambiguity.");
        a.rho_hi = need_number(j, "rho_hi", "ambiguity.");
    } else {
        fail("ambiguity.kind", "expected uncertain_volatility | ambiguous_correlation");
    }
    return a;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!j.is_object()) throw ConfigError("config root must be an object");

    ExperimentConfig c;
    c.market = parse_market(need(j, "market", ""));
    c.ambiguity = parse_ambiguity(need(j, "ambiguity", ""));

    const json& inv = need(j, "investor", "");
    c.investor.lambda = need_number(inv, "lambda", "investor.");
    c.investor.x0 = need_number(inv, "x0", "investor.");
    c.investor.horizon = need_number(inv, "horizon", "investor.");

    if (auto it = j.find("strategies"); it != j.end()) {
        const json& s = *it;
        if (auto r = s.find("robust"); r != s.end()) {
            if (!r->is_boolean()) fail("strategies.robust", "expected a boolean");
            c.robust_enabled = r->get<bool>();
        }
        if (auto m = s.find("misspecified"); m != s.end()) {
            if (!m->is_array())
                fail("strategies.misspecified",
                     "expected an array of numbers or {value, seed} objects");
            for (const auto& v : *m) {
                if (v.is_number()) {
                    c.misspecified.emplace_back(v.get<double>());
                } else if (v.is_object()) {
                    MisspecifiedSpec entry(need_number(v, "value", "strategies.misspecified."));
                    if (auto sd = v.find("seed"); sd != v.end()) {
                        if (!sd->is_number_integer() || sd->get<std::int64_t>() < 0)
                            fail("strategies.misspecified.seed",
                                 "expected a nonnegative integer");
                        entry.seed = sd->get<std::uint64_t>();
                    }
                    c.misspecified.push_back(entry);
                } else {
                    fail("strategies.misspecified",
                         "expected an array of numbers or {value, seed} objects");
                }
            }
        }
    }

    if (auto it = j.find("simulation"); it != j.end()) {
        const json& s = *it;
        if (auto v = s.find("n_paths"); v != s.end()) {
            if (!v->is_number_integer() || v->get<std::int64_t>() < 1)
                fail("simulation.n_paths", "expected a positive integer");
            c.simulation.n_paths = v->get<std::int64_t>();
        }
        if (auto v = s.find("n_steps"); v != s.end()) {
            if (!v->is_number_integer() || v->get<std::int64_t>() < 1)
                fail("simulation.n_steps", "expected a positive integer");
            c.simulation.n_steps = static_cast<int>(v->get<std::int64_t>());
        }
        if (auto v = s.find("seed"); v != s.end()) {
            if (!v->is_number_integer()) fail("simulation.seed", "expected an integer");
            c.simulation.seed = v->get<std::uint64_t>();
        }
    }

    if (auto it = j.find("frontier"); it != j.end()) {
        const json& f = *it;
        if (auto v = f.find("vartheta"); v != f.end()) {
            if (!v->is_array()) fail("frontier.vartheta", "expected an array of numbers");
            for (const auto& x : *v) {
                if (!x.is_number()) fail("frontier.vartheta", "expected numbers");
                c.vartheta_grid.push_back(x.get<double>());
            }
        }
    }

    if (auto it = j.find("output"); it != j.end()) {
        const json& o = *it;
        if (auto v = o.find("dir"); v != o.end()) {
            if (!v->is_string()) fail("output.dir", "expected a string");
            c.output.dir = v->get<std::string>();
        }
        if (auto v = o.find("samples"); v != o.end()) {
            if (!v->is_string()) fail("output.samples", "expected a string");
            c.output.samples = v->get<std::string>();
            if (c.output.samples != "none" && c.output.samples != "csv" &&
                c.output.samples != "bin")
                fail("output.samples", "expected none | csv | bin");
        }
        if (auto v = o.find("paths_csv"); v != o.end()) {
            if (!v->is_number_integer() || v->get<std::int64_t>() < 0)
                fail("output.paths_csv", "expected a nonnegative integer");
            c.output.paths_csv = static_cast<int>(v->get<std::int64_t>());
        }
    }

    // Semantic validation up front: a config whose numbers violate a module
    // invariant is a config error, not a runtime failure.
    try {
        switch (c.market.kind) {
            case MarketSpec::Kind::HestonBounded:
                validate(c.market.heston);
                break;
            case MarketSpec::Kind::StochCorr:
                validate(c.market.stochcorr);
                break;
            case MarketSpec::Kind::ConstantSigma:
                validate(c.market.constant);
                break;
        }
        const AmbiguitySet set = c.ambiguity.build();
        if (set.d() != c.market.n_assets())
            throw ConfigError("ambiguity dimension does not match the market's asset count");
        if (!(c.investor.lambda > 0.0))
            throw ConfigError("investor.lambda must be positive");
        if (!(c.investor.horizon > 0.0))
            throw ConfigError("investor.horizon must be positive");
        if (!c.misspecified.empty()) {
            if (c.ambiguity.kind == AmbiguityKind::UncertainVolatility && set.d() != 1)
                throw ConfigError(
                    "misspecified volatility sweeps need a single-asset market");
            for (const auto& m : c.misspecified) {
                if (c.ambiguity.kind == AmbiguityKind::UncertainVolatility && !(m.value > 0.0))
                    throw ConfigError("strategies.misspecified: volatilities must be positive");
                if (c.ambiguity.kind == AmbiguityKind::AmbiguousCorrelation &&
                    !(m.value > -1.0 && m.value < 1.0))
                    throw ConfigError(
                        "strategies.misspecified: correlations must lie in (-1, 1)");
            }
        }
        for (double v : c.vartheta_grid)
            if (!(v > 0.0)) throw ConfigError("frontier.vartheta: entries must be positive");
    } catch (const ConfigError&) {
        throw;
    } catch (const Error& e) {
        throw ConfigError(std::string("config invalid: ") + e.what());
    }
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

namespace {

json vector_json(const Eigen::VectorXd& v) {
    json a = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
    return a;
}

}  // namespace

std::string serialize_config(const ExperimentConfig& c) {
    json j;
    json& m = j["market"];
    switch (c.market.kind) {
        case MarketSpec::Kind::HestonBounded: {
            const auto& h = c.market.heston;
            m = {{"kind", "heston_bounded"}, {"b", h.b},
                 {"kappa", h.kappa},         {"eta", h.eta},
                 {"sigma0", h.sigma0},       {"sigma_lo", h.sigma_lo},
                 {"sigma_hi", h.sigma_hi},   {"sigma_inf", h.sigma_inf},
                 {"rho", h.rho}};
            break;
        }
        case MarketSpec::Kind::StochCorr: {
            const auto& s = c.market.stochcorr;
            m = {{"kind", "stoch_corr"},
                 {"b", {s.b(0), s.b(1)}},
                 {"sigma", {s.sigma1, s.sigma2}},
                 {"kappa", s.kappa},
                 {"eta", s.eta},
                 {"rho0", s.rho0},
                 {"rho_inf", s.rho_inf},
                 {"rho_hi", s.rho_hi}};
            break;
        }
        case MarketSpec::Kind::ConstantSigma: {
            const auto& cm = c.market.constant;
            m["kind"] = "constant_sigma";
            m["b"] = vector_json(cm.b);
            json rows = json::array();
            for (Eigen::Index r = 0; r < cm.sigma.rows(); ++r) {
                json row = json::array();
                for (Eigen::Index cc = 0; cc < cm.sigma.cols(); ++cc)
                    row.push_back(cm.sigma(r, cc));
                rows.push_back(row);
            }
            m["sigma"] = rows;
            break;
        }
    }
    json& a = j["ambiguity"];
    if (c.ambiguity.kind == AmbiguityKind::UncertainVolatility) {
        a["kind"] = "uncertain_volatility";
        a["sigma_lo"] = vector_json(c.ambiguity.sigma_lo);
        a["sigma_hi"] = vector_json(c.ambiguity.sigma_hi);
    } else {
        a["kind"] = "ambiguous_correlation";
        a["sigma1"] = c.ambiguity.sigma1;
        a["sigma2"] = c.ambiguity.sigma2;
        a["rho_lo"] = c.ambiguity.rho_lo;
        a["rho_hi"] = c.ambiguity.rho_hi;
    }
    j["investor"] = {{"lambda", c.investor.lambda},
                     {"x0", c.investor.x0},
                     {"horizon", c.investor.horizon}};
    json misspec = json::array();
    for (const auto& m : c.misspecified) {
        if (m.seed)
            misspec.push_back(json{{"value", m.value}, {"seed", *m.seed}});
        else
            misspec.push_back(m.value);
    }
    j["strategies"] = {{"robust", c.robust_enabled}, {"misspecified", misspec}};
    j["simulation"] = {{"n_paths", c.simulation.n_paths},
                       {"n_steps", c.simulation.n_steps},
                       {"seed", c.simulation.seed}};
    j["frontier"] = {{"vartheta", c.vartheta_grid}};
    j["output"] = {{"dir", c.output.dir},
                   {"samples", c.output.samples},
                   {"paths_csv", c.output.paths_csv}};
    return j.dump(2) + "\n";
}

}  // namespace rmv
