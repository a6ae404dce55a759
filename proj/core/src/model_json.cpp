#include "ddae/model_json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ddae/errors.hpp"

namespace ddae {

namespace {

using nlohmann::json;

Matrix read_matrix(const json& j, const char* what) {
    if (!j.is_array() || j.empty()) {
        throw ConfigError(std::string(what) + " must be a non-empty array of rows");
    }
    const auto rows = static_cast<Eigen::Index>(j.size());
    const auto cols = j[0].is_array() ? static_cast<Eigen::Index>(j[0].size()) : 0;
    if (cols == 0) {
        throw ConfigError(std::string(what) + " rows must be non-empty arrays");
    }
    Matrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        const json& row = j[static_cast<std::size_t>(i)];
        if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
            throw ConfigError(std::string(what) + " is ragged");
        }
        for (Eigen::Index k = 0; k < cols; ++k) {
            const json& v = row[static_cast<std::size_t>(k)];
            if (!v.is_number()) {
                throw ConfigError(std::string(what) + " has a non-numeric entry");
            }
            m(i, k) = v.get<double>();
        }
    }
    return m;
}

json write_matrix(const Matrix& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index k = 0; k < m.cols(); ++k) {
            row.push_back(m(i, k));
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

int differential_count(const Matrix& e) {
    if (e.rows() != e.cols()) {
        throw ConfigError("E must be square");
    }
    int nu = 0;
    while (nu < e.rows() && e(nu, nu) == 1.0) {
        ++nu;
    }
    return nu;
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string ModelSource::hash_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash_));
    return buf;
}

void ModelSource::finish(std::string canonical) {
    canonical_ = std::move(canonical);
    hash_ = fnv1a64(canonical_);
}

ModelSource ModelSource::from_builtin(std::string_view name, const ParamMap& overrides) {
    ModelSource s;
    s.builtin_ = make_builtin(name, overrides);
    s.name_ = s.builtin_->name;
    json params = json::object();
    for (const auto& [k, v] : s.builtin_->params) {
        params[k] = v;
    }
    s.finish(json{{"builtin", s.name_}, {"params", params}}.dump());
    return s;
}

ModelSource ModelSource::from_linear(LinearDelayModel model, std::optional<State> history) {
    model.validate();
    ModelSource s;
    s.name_ = "linear";
    if (history) {
        if (history->x.size() != model.nu || history->y.size() != model.mu) {
            throw ConfigError("history has wrong dimensions for the linear model");
        }
        s.linear_history_ = *history;
    } else {
        s.linear_history_ = State{Vector::Ones(model.nu), Vector::Zero(model.mu)};
    }
    json ak = json::array();
    for (const auto& a : model.Ak) {
        ak.push_back(write_matrix(a));
    }
    json hist = json::array();
    const Vector hv = stack(s.linear_history_.x, s.linear_history_.y);
    for (Eigen::Index i = 0; i < hv.size(); ++i) {
        hist.push_back(hv(i));
    }
    json lin = {{"h", model.h}, {"E", write_matrix(model.E)}, {"A0", write_matrix(model.A0)},
                {"Ak", ak},     {"history", hist}};
    s.linear_ = std::move(model);
    s.finish(json{{"linear", lin}}.dump());
    return s;
}

ModelSource ModelSource::parse(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("model JSON must be an object");
    }
    try {
        if (doc.contains("builtin")) {
            ParamMap params;
            if (doc.contains("params")) {
                for (const auto& [k, v] : doc.at("params").items()) {
                    if (!v.is_number()) {
                        throw ConfigError("model parameter '" + k + "' must be numeric");
                    }
                    params[k] = v.get<double>();
                }
            }
            return from_builtin(doc.at("builtin").get<std::string>(), params);
        }
        if (doc.contains("linear")) {
            const json& lin = doc.at("linear");
            const Matrix e = read_matrix(lin.at("E"), "E");
            const int nu = differential_count(e);
            const int mu = static_cast<int>(e.rows()) - nu;
            std::vector<Matrix> ak;
            for (const auto& a : lin.at("Ak")) {
                ak.push_back(read_matrix(a, "Ak"));
            }
            if (ak.empty()) {
                ak.push_back(Matrix::Zero(e.rows(), e.rows()));
            }
            LinearDelayModel m = make_linear_model(nu, mu, read_matrix(lin.at("A0"), "A0"), std::move(ak),
                                                   lin.at("h").get<double>());
            if (m.E != e) {
                throw ConfigError("E must have the block form diag(I, 0)");
            }
            std::optional<State> history;
            if (lin.contains("history")) {
                const auto values = lin.at("history").get<std::vector<double>>();
                if (static_cast<int>(values.size()) != m.dim()) {
                    throw ConfigError("history must have nu + mu entries");
                }
                const Vector v = Eigen::Map<const Vector>(values.data(), m.dim());
                history = unstack(v, nu);
            }
            return from_linear(std::move(m), history);
        }
    } catch (const json::exception& e) {
        throw ConfigError(std::string("model JSON: ") + e.what());
    } catch (const DimensionError& e) {
        throw ConfigError(std::string("model JSON: ") + e.what());
    }
    throw ConfigError("model JSON needs a 'builtin' or a 'linear' key");
}

ModelSource ModelSource::load(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("cannot read model file " + path.string());
    }
    std::ostringstream text;
    text << in.rdbuf();
    return parse(text.str());
}

DdaeSystem ModelSource::system() const {
    if (builtin_) {
        return builtin_->system;
    }
    return realize(*linear_, linear_history_);
}

State ModelSource::equilibrium() const {
    if (builtin_) {
        return builtin_->equilibrium;
    }
    return State{Vector::Zero(linear_->nu), Vector::Zero(linear_->mu)};
}

LinearDelayModel ModelSource::linear_model(double h) const {
    if (linear_ && std::abs(h - linear_->h) <= 1e-12 * linear_->h) {
        return *linear_;
    }
    const DdaeSystem sys = system();
    const EquilibriumPoint eq = find_equilibrium(sys, equilibrium());
    return linearize(sys, eq, h);
}

std::optional<double> ModelSource::native_step() const {
    if (linear_) {
        return linear_->h;
    }
    return std::nullopt;
}

std::vector<double> ModelSource::delays() const { return delay_values(system()); }

}  // namespace ddae
