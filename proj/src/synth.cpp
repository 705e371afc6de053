#include "eqmine/synth.hpp"

#include <cmath>
#include <vector>

#include "eqmine/errors.hpp"
#include "eqmine/rng.hpp"

namespace eqmine {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kFig1Rho = 0.9;
constexpr double kFig1Shift = 3.0;

Relation make_relation(std::string name, const std::string& prefix, std::size_t dims,
                       std::size_t rows) {
    Relation rel;
    rel.name = std::move(name);
    rel.row_count = rows;
    rel.columns.resize(dims);
    for (std::size_t d = 0; d < dims; ++d) {
        rel.columns[d].name = prefix + std::to_string(d);
        rel.columns[d].values.assign(rows, 0.0);
    }
    return rel;
}

// lower-triangular Cholesky factor of the equicorrelation matrix
// (1-rho) I + rho J; dims is small so the O(d^3) loop is fine
std::vector<double> equicorr_cholesky(std::size_t d, double rho) {
    std::vector<double> a(d * d, rho);
    for (std::size_t i = 0; i < d; ++i) a[i * d + i] = 1.0;
    std::vector<double> L(d * d, 0.0);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = a[i * d + j];
            for (std::size_t k = 0; k < j; ++k) s -= L[i * d + k] * L[j * d + k];
            if (i == j) {
                if (s <= 0.0) throw ConfigError("rho makes the correlation matrix non-PSD");
                L[i * d + i] = std::sqrt(s);
            } else {
                L[i * d + j] = s / L[j * d + j];
            }
        }
    }
    return L;
}

// draw one row into out[0..dims); generation order per row is frozen
void draw_row(Rng& rng, const ScenarioSpec& spec, const std::vector<double>& chol,
              std::vector<double>& out) {
    const std::size_t d = spec.dims;
    switch (spec.family) {
        case Family::GaussIid:
            for (std::size_t i = 0; i < d; ++i) out[i] = rng.normal();
            break;
        case Family::GaussCorr: {
            std::vector<double> z(d);
            for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
            for (std::size_t i = 0; i < d; ++i) {
                double s = 0.0;
                for (std::size_t k = 0; k <= i; ++k) s += chol[i * d + k] * z[k];
                out[i] = s;
            }
            break;
        }
        case Family::Mixture: {
            double center = rng.uniform01() < 0.5 ? -1.5 : 1.5;
            for (std::size_t i = 0; i < d; ++i) out[i] = center + 0.5 * rng.normal();
            break;
        }
        case Family::Ring: {
            double radius = 1.0 + 0.1 * rng.normal();
            if (d == 1) {
                out[0] = rng.uniform01() < 0.5 ? -radius : radius;
            } else if (d == 2) {
                double theta = 2.0 * kPi * rng.uniform01();
                out[0] = radius * std::cos(theta);
                out[1] = radius * std::sin(theta);
            } else {
                double norm2 = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    out[i] = rng.normal();
                    norm2 += out[i] * out[i];
                }
                double scale = radius / std::sqrt(norm2);
                for (std::size_t i = 0; i < d; ++i) out[i] *= scale;
            }
            break;
        }
    }
}

}  // namespace

void ScenarioSpec::validate() const {
    if (rows < 2) throw ConfigError("rows must be >= 2");
    if (dims < 1) throw ConfigError("dims must be >= 1");
    if (family == Family::GaussCorr) {
        if (!(std::abs(rho) < 1.0)) throw ConfigError("|rho| must be < 1");
        if (dims >= 2 && rho <= -1.0 / (static_cast<double>(dims) - 1.0))
            throw ConfigError("rho too negative for this dimension");
    }
}

std::pair<Relation, Relation> gen_null_pair(const ScenarioSpec& spec) {
    spec.validate();
    Rng rng(spec.seed);
    std::vector<double> chol;
    if (spec.family == Family::GaussCorr && spec.dims >= 2)
        chol = equicorr_cholesky(spec.dims, spec.rho);

    Relation left = make_relation("left", "a", spec.dims, spec.rows);
    Relation right = make_relation("right", "b", spec.dims, spec.rows);
    std::vector<double> row(spec.dims);
    for (std::size_t i = 0; i < spec.rows; ++i) {
        draw_row(rng, spec, chol, row);
        for (std::size_t d = 0; d < spec.dims; ++d) left.columns[d].values[i] = row[d];
    }
    for (std::size_t i = 0; i < spec.rows; ++i) {
        draw_row(rng, spec, chol, row);
        for (std::size_t d = 0; d < spec.dims; ++d) right.columns[d].values[i] = row[d];
    }
    return {std::move(left), std::move(right)};
}

std::pair<Relation, Relation> gen_fig1_scenario(std::size_t rows, std::uint64_t seed) {
    if (rows < 2) throw ConfigError("rows must be >= 2");
    Rng rng(seed);
    const double tail = std::sqrt(1.0 - kFig1Rho * kFig1Rho);

    Relation r;
    r.name = "R";
    r.row_count = rows;
    r.columns = {{"A", {}}, {"B", {}}};
    Relation s;
    s.name = "S";
    s.row_count = rows;
    s.columns = {{"C", {}}, {"D", {}}, {"E", {}}, {"F", {}}};
    for (auto& c : r.columns) c.values.assign(rows, 0.0);
    for (auto& c : s.columns) c.values.assign(rows, 0.0);

    auto fill_bvn = [&](std::vector<double>& first, std::vector<double>& second, double rho) {
        for (std::size_t i = 0; i < rows; ++i) {
            double z1 = rng.normal();
            double z2 = rng.normal();
            first[i] = z1;
            second[i] = kFig1Shift + rho * z1 + tail * z2;
        }
    };
    fill_bvn(r.columns[0].values, r.columns[1].values, kFig1Rho);   // (A,B)
    fill_bvn(s.columns[0].values, s.columns[1].values, kFig1Rho);   // (C,D)
    fill_bvn(s.columns[2].values, s.columns[3].values, -kFig1Rho);  // (E,F)
    return {std::move(r), std::move(s)};
}

std::pair<Relation, Relation> gen_shifted_pair(std::size_t rows, std::size_t dims, double delta,
                                               std::uint64_t seed) {
    ScenarioSpec spec{rows, seed, Family::GaussIid, 0.0, dims};
    auto [left, right] = gen_null_pair(spec);
    for (auto& col : right.columns)
        for (double& v : col.values) v += delta;
    return {std::move(left), std::move(right)};
}

}  // namespace eqmine
