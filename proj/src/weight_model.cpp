#include "weaklab/weight_model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>

#include "weaklab/errors.hpp"

namespace weaklab {

namespace {

template <class... Ts>
struct overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

struct Monomial {
    std::vector<double> coef;
    double exponent = 0.0;
};

Monomial monomial_form(const WeightSpec& spec, const Grid& grid) {
    const auto n = static_cast<std::size_t>(grid.cells());
    return std::visit(
        overloaded{
            [&](const ConstantSpec& s) { return Monomial{std::vector<double>(n, s.c), 0.0}; },
            [&](const PowerSpec& s) { return Monomial{std::vector<double>(n, 1.0), s.delta - 1.0}; },
            [&](const StepSpec& s) {
                // Cells of [0,1) are exactly the first 2^L cells.
                std::vector<double> c(n, 1.0);
                const auto unit = std::min<std::size_t>(n, std::size_t{1} << grid.L);
                std::fill(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(unit), s.alpha);
                return Monomial{std::move(c), 0.0};
            },
            [&](const PiecewiseSpec& s) {
                if (s.values.size() != n)
                    throw ConfigError("piecewise weight has " + std::to_string(s.values.size()) +
                                      " values, grid has " + std::to_string(n) + " cells");
                return Monomial{s.values, 0.0};
            },
            [&](const CsvSpec& s) { return Monomial{read_weight_values(s.path, grid), 0.0}; },
            [&](const ProductSpec& s) {
                Monomial l = monomial_form(*s.left, grid);
                Monomial r = monomial_form(*s.right, grid);
                for (std::size_t i = 0; i < n; ++i) l.coef[i] *= r.coef[i];
                l.exponent += r.exponent;
                return l;
            },
        },
        spec.kind);
}

double ess_inf_on(double c, double s, double a, double b) {
    if (s == 0.0) return c;
    if (s < 0.0) return c * std::pow(b, s);
    return a == 0.0 ? 0.0 : c * std::pow(a, s);
}

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<double> read_rows(const std::filesystem::path& path, bool require_positive) {
    std::ifstream in(path);
    if (!in) throw IngestError("cannot open '" + path.string() + "'", 0);
    std::vector<double> values;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        const std::string tok = trim(line);
        double x = 0.0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), x);
        if (tok.empty() || ec != std::errc{} || ptr != tok.data() + tok.size())
            throw IngestError(path.string() + ": row " + std::to_string(row) + ": not a number: '" + tok + "'", row);
        if (!std::isfinite(x))
            throw IngestError(path.string() + ": row " + std::to_string(row) + ": value is not finite", row);
        if (require_positive && !(x > 0.0))
            throw IngestError(path.string() + ": row " + std::to_string(row) + ": weight value " + tok +
                                  " is not positive",
                              row);
        values.push_back(x);
    }
    return values;
}

void write_rows(std::span<const double> values, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IngestError("cannot write '" + path.string() + "'", 0);
    char buf[64];
    for (double x : values) {
        auto res = std::to_chars(buf, buf + sizeof buf, x);
        out.write(buf, res.ptr - buf);
        out.put('\n');
    }
}

}  // namespace

double power_integral(double a, double b, double t) {
    if (!(b > a)) return 0.0;
    if (t == 0.0) return b - a;
    if (a == 0.0) {
        if (t <= -1.0) return kDivergent;
        return std::pow(b, t + 1.0) / (t + 1.0);
    }
    const double log_ratio = std::log1p((b - a) / a);
    if (t == -1.0) return log_ratio;
    return std::pow(a, t + 1.0) * std::expm1((t + 1.0) * log_ratio) / (t + 1.0);
}

double log_integral(double a, double b) {
    if (!(b > a)) return 0.0;
    if (a == 0.0) return b * std::log(b) - b;
    return (b - a) * (std::log(b) - 1.0) + a * std::log1p((b - a) / a);
}

GridWeight::GridWeight(const Grid& grid, std::vector<double> coefficients, double exponent,
                       const ExponentSet& exponents)
    : grid_(grid), coef_(std::move(coefficients)), exponent_(exponent), exponents_(exponents) {
    const auto n = static_cast<std::size_t>(grid.cells());
    if (coef_.size() != n) throw ConfigError("weight coefficient count does not match the grid");
    for (double c : coef_)
        if (!(c > 0.0) || !std::isfinite(c)) throw ConfigError("weight coefficients must be positive and finite");

    const double h = grid.cell_width();
    cell_mass_.resize(n);
    cell_essinf_.resize(n);
    std::vector<double> logs(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) * h;
        const double b = static_cast<double>(i + 1) * h;
        cell_mass_[i] = coef_[i] * power_integral(a, b, exponent_);
        cell_essinf_[i] = ess_inf_on(coef_[i], exponent_, a, b);
        logs[i] = h * std::log(coef_[i]) + (exponent_ == 0.0 ? 0.0 : exponent_ * log_integral(a, b));
    }
    mass_ = sum_tree(cell_mass_);
    essinf_ = DyadicTree<double>(grid_, std::span<const double>(cell_essinf_),
                                 [](double x, double y) { return std::min(x, y); });
    log_ = sum_tree(logs);
    for (double p : exponents_.dual_p) {
        if (!(p > 1.0)) throw ConfigError("dual exponent needs p > 1");
        if (!dual_.contains(p)) dual_.emplace(p, sum_tree(cell_power_masses(-1.0 / (p - 1.0))));
    }
    for (double r : exponents_.power_r)
        if (!power_.contains(r)) power_.emplace(r, sum_tree(cell_power_masses(r)));
}

DyadicTree<double> GridWeight::sum_tree(const std::vector<double>& cells) const {
    return DyadicTree<double>(grid_, std::span<const double>(cells), std::plus<double>{});
}

std::vector<double> GridWeight::cell_power_masses(double q) const {
    const auto n = coef_.size();
    const double h = grid_.cell_width();
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double a = static_cast<double>(i) * h;
        const double b = static_cast<double>(i + 1) * h;
        out[i] = std::pow(coef_[i], q) * power_integral(a, b, exponent_ * q);
    }
    return out;
}

double GridWeight::cell_mass(std::int64_t i) const { return cell_mass_[static_cast<std::size_t>(i)]; }
double GridWeight::cell_ess_inf(std::int64_t i) const { return cell_essinf_[static_cast<std::size_t>(i)]; }
double GridWeight::cell_value(std::int64_t i) const {
    if (exponent_ == 0.0) return coef_[static_cast<std::size_t>(i)];
    return cell_mass(i) / grid_.cell_width();
}

std::vector<double> GridWeight::cell_masses() const { return cell_mass_; }

std::vector<double> GridWeight::cell_values() const {
    std::vector<double> out(coef_.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = cell_value(static_cast<std::int64_t>(i));
    return out;
}

double GridWeight::dual_mass(const Cube& q, double p) const {
    auto it = dual_.find(p);
    if (it == dual_.end())
        throw UncachedExponentError("dual mass for p=" + std::to_string(p) +
                                    " was not cached; re-realize with it in ExponentSet::dual_p");
    return it->second[q];
}

double GridWeight::power_mass(const Cube& q, double r) const {
    auto it = power_.find(r);
    if (it == power_.end())
        throw UncachedExponentError("power mass for r=" + std::to_string(r) +
                                    " was not cached; re-realize with it in ExponentSet::power_r");
    return it->second[q];
}

double GridWeight::integral(double a, double b) const {
    a = std::max(a, 0.0);
    b = std::min(b, grid_.domain_length());
    if (!(b > a)) return 0.0;
    const double h = grid_.cell_width();
    const auto first = static_cast<std::int64_t>(std::floor(a / h));
    const auto last = std::min<std::int64_t>(static_cast<std::int64_t>(std::ceil(b / h)), grid_.cells());
    double total = 0.0;
    for (std::int64_t i = first; i < last; ++i) {
        const double lo = static_cast<double>(i) * h;
        const double hi = static_cast<double>(i + 1) * h;
        if (a <= lo && hi <= b) {
            total += cell_mass(i);
        } else {
            total += coef_[static_cast<std::size_t>(i)] * power_integral(std::max(a, lo), std::min(b, hi), exponent_);
        }
    }
    return total;
}

GridWeight GridWeight::with_exponents(const ExponentSet& extra) const {
    ExponentSet merged = exponents_;
    for (double p : extra.dual_p)
        if (std::find(merged.dual_p.begin(), merged.dual_p.end(), p) == merged.dual_p.end()) merged.dual_p.push_back(p);
    for (double r : extra.power_r)
        if (std::find(merged.power_r.begin(), merged.power_r.end(), r) == merged.power_r.end())
            merged.power_r.push_back(r);
    return GridWeight(grid_, coef_, exponent_, merged);
}

GridWeight GridWeight::power(double q, const ExponentSet& exponents) const {
    std::vector<double> c(coef_.size());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] = std::pow(coef_[i], q);
    return GridWeight(grid_, std::move(c), exponent_ * q, exponents);
}

GridWeight realize(const WeightSpec& spec, const Grid& grid, const ExponentSet& exponents) {
    validate(spec);
    Monomial m = monomial_form(spec, grid);
    return GridWeight(grid, std::move(m.coef), m.exponent, exponents);
}

GridWeight product(const GridWeight& u, const GridWeight& v, const ExponentSet& exponents) {
    if (!(u.grid() == v.grid())) throw ConfigError("product of weights on different grids");
    std::vector<double> c(u.coefficients().begin(), u.coefficients().end());
    for (std::size_t i = 0; i < c.size(); ++i) c[i] *= v.coefficients()[i];
    return GridWeight(u.grid(), std::move(c), u.exponent() + v.exponent(), exponents);
}

GridFunction::GridFunction(const Grid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (static_cast<std::int64_t>(values_.size()) != grid.cells())
        throw ConfigError("function has " + std::to_string(values_.size()) + " values, grid has " +
                          std::to_string(grid.cells()) + " cells");
    for (double x : values_)
        if (!std::isfinite(x)) throw ConfigError("function values must be finite");
}

GridFunction GridFunction::zeros(const Grid& grid) {
    return GridFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.cells()), 0.0));
}

GridFunction GridFunction::constant(const Grid& grid, double c) {
    return GridFunction(grid, std::vector<double>(static_cast<std::size_t>(grid.cells()), c));
}

GridFunction refine(const GridFunction& f, int new_L) {
    const Grid& g = f.grid();
    if (new_L < g.L) throw ConfigError("refine needs new_L >= L");
    const Grid fine = build_grid(g.J, new_L);
    const std::size_t rep = std::size_t{1} << (new_L - g.L);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(fine.cells()));
    for (double x : f.values()) out.insert(out.end(), rep, x);
    return GridFunction(fine, std::move(out));
}

std::vector<double> read_weight_values(const std::filesystem::path& path, const Grid& grid) {
    std::vector<double> values = read_rows(path, true);
    if (static_cast<std::int64_t>(values.size()) != grid.cells())
        throw IngestError(path.string() + ": expected " + std::to_string(grid.cells()) + " rows, found " +
                              std::to_string(values.size()),
                          values.size() + 1);
    return values;
}

GridWeight load_weight_csv(const std::filesystem::path& path, const Grid& grid, const ExponentSet& exponents) {
    return GridWeight(grid, read_weight_values(path, grid), 0.0, exponents);
}

void save_weight_csv(const GridWeight& w, const std::filesystem::path& path) { write_rows(w.cell_values(), path); }

GridFunction load_function_csv(const std::filesystem::path& path, const Grid& grid) {
    std::vector<double> values = read_rows(path, false);
    if (static_cast<std::int64_t>(values.size()) != grid.cells())
        throw IngestError(path.string() + ": expected " + std::to_string(grid.cells()) + " rows, found " +
                              std::to_string(values.size()),
                          values.size() + 1);
    return GridFunction(grid, std::move(values));
}

GridFunction load_function_csv(const std::filesystem::path& path, int J) {
    std::vector<double> values = read_rows(path, false);
    const auto n = values.size();
    if (n == 0 || (n & (n - 1)) != 0)
        throw IngestError(path.string() + ": row count " + std::to_string(n) + " is not a power of two", 0);
    int depth = 0;
    while ((std::size_t{1} << depth) < n) ++depth;
    if (depth < J)
        throw IngestError(path.string() + ": " + std::to_string(n) + " rows cannot cover [0, 2^" + std::to_string(J) + ")", 0);
    return GridFunction(build_grid(J, depth - J), std::move(values));
}

void save_function_csv(const GridFunction& f, const std::filesystem::path& path) { write_rows(f.values(), path); }

}  // namespace weaklab
