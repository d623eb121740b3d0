#include "edm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace edm {

namespace detail {

namespace {

// Continued-fraction kernel (Lentz). Assumes 0 < x < 1.
double beta_cf(double a, double b, double x) {
    constexpr int kMaxIterations = 300;
    constexpr double kEps = 1e-12;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) throw ArgumentError("beta parameters must be positive");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(ln_front);
    // The continued fraction converges fast only below the distribution
    // mean; use the symmetry I_x(a,b) = 1 - I_{1-x}(b,a) past it.
    if (x < (a + 1.0) / (a + b + 2.0)) return front * beta_cf(a, b, x) / a;
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double student_t_two_tailed(double t, double df) {
    if (df <= 0) throw ArgumentError("degrees of freedom must be positive");
    if (std::isinf(t)) return 0.0;
    const double x = df / (df + t * t);
    return regularized_incomplete_beta(df / 2.0, 0.5, x);
}

} // namespace detail

CorrelationResult pearson(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw ArgumentError("columns differ in length");
    const std::size_t n = x.size();
    if (n < 3) throw SampleSizeError("need at least 3 pairs");

    double mx = 0, my = 0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);

    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mx;
        const double dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0 || syy == 0) throw DegenerateError("constant column");

    CorrelationResult result;
    result.n = n;
    result.r = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);

    const double df = static_cast<double>(n - 2);
    const double r2 = result.r * result.r;
    if (r2 >= 1.0) {
        result.p_two_tailed = 0.0;
    } else {
        const double t = result.r * std::sqrt(df / (1.0 - r2));
        result.p_two_tailed = detail::student_t_two_tailed(t, df);
    }
    if (result.p_two_tailed < 0.01)
        result.significant_at = 0.01;
    else if (result.p_two_tailed < 0.05)
        result.significant_at = 0.05;
    return result;
}

std::size_t CrossTab::row_total(std::size_t i) const {
    std::size_t sum = 0;
    for (std::size_t v : cells.at(i)) sum += v;
    return sum;
}

std::size_t CrossTab::col_total(std::size_t j) const {
    std::size_t sum = 0;
    for (const auto& row : cells) sum += row.at(j);
    return sum;
}

std::size_t CrossTab::grand_total() const {
    std::size_t sum = 0;
    for (std::size_t i = 0; i < cells.size(); ++i) sum += row_total(i);
    return sum;
}

CrossTab crosstab(const Dataset& ds, std::string_view row_attr, std::string_view col_attr) {
    const auto ri = ds.schema().find(row_attr);
    const auto ci = ds.schema().find(col_attr);
    if (!ri) throw SchemaError("unknown attribute: " + std::string(row_attr));
    if (!ci) throw SchemaError("unknown attribute: " + std::string(col_attr));
    const Attribute& ra = ds.schema().at(*ri);
    const Attribute& ca = ds.schema().at(*ci);
    if (ra.kind != AttrKind::Nominal || ca.kind != AttrKind::Nominal)
        throw TypeError("cross-tabulation requires nominal attributes");

    CrossTab table;
    table.row_attribute = ra.name;
    table.col_attribute = ca.name;
    table.row_labels = ra.domain;
    table.col_labels = ca.domain;
    table.cells.assign(ra.domain.size(), std::vector<std::size_t>(ca.domain.size(), 0));
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const Value& rv = ds.at(r).values[*ri];
        const Value& cv = ds.at(r).values[*ci];
        if (is_missing(rv) || is_missing(cv))
            throw MissingValueError("missing value at row " + std::to_string(r));
        ++table.cells[std::get<NominalValue>(rv).index][std::get<NominalValue>(cv).index];
    }
    return table;
}

std::vector<double> encode_column(const Dataset& ds, std::string_view attribute,
                                  const std::map<std::string, double>& encoding) {
    const auto idx = ds.schema().find(attribute);
    if (!idx) throw SchemaError("unknown attribute: " + std::string(attribute));
    const Attribute& attr = ds.schema().at(*idx);

    std::vector<double> out;
    out.reserve(ds.size());
    for (std::size_t r = 0; r < ds.size(); ++r) {
        const Value& v = ds.at(r).values[*idx];
        if (is_missing(v))
            throw MissingValueError("missing value at row " + std::to_string(r));
        if (attr.kind == AttrKind::Numeric) {
            out.push_back(std::get<double>(v));
            continue;
        }
        const std::string& label = attr.domain[std::get<NominalValue>(v).index];
        const auto it = encoding.find(label);
        if (it == encoding.end())
            throw ArgumentError("no numeric encoding for label '" + label + "'");
        out.push_back(it->second);
    }
    return out;
}

namespace {

std::string sig_text(double p) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << p;
    std::string s = out.str();
    if (s.size() > 1 && s[0] == '0') s.erase(0, 1); // SPSS prints .000
    return s;
}

std::string r_text(double r, std::optional<double> level) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(3) << r;
    std::string s = out.str();
    const auto pos = s.find("0.");
    if (pos != std::string::npos) s.erase(pos, 1);
    if (level && *level == 0.01) s += "**";
    else if (level && *level == 0.05) s += "*";
    return s;
}

} // namespace

std::string render_correlation(const CorrelationResult& result, std::string_view x_name,
                               std::string_view y_name) {
    std::ostringstream out;
    const std::string rtxt = r_text(result.r, result.significant_at);
    const std::string ptxt = sig_text(result.p_two_tailed);
    const std::string ntxt = std::to_string(result.n);

    const std::size_t w = std::max<std::size_t>(x_name.size(), 20);
    const auto block = [&](std::string_view name, const std::string& self_r,
                           const std::string& cross_r, bool cross_sig) {
        out << name << '\n';
        out << "  Pearson Correlation  " << std::setw(8) << self_r << std::setw(10) << cross_r
            << '\n';
        out << "  Sig. (2-tailed)      " << std::setw(8) << (cross_sig ? "" : ptxt)
            << std::setw(10) << (cross_sig ? ptxt : "") << '\n';
        out << "  N                    " << std::setw(8) << ntxt << std::setw(10) << ntxt << '\n';
    };
    out << "Correlations" << std::string(w, ' ') << '\n';
    out << std::string(23, ' ') << std::setw(8) << x_name << std::setw(10) << y_name << '\n';
    block(x_name, "1", rtxt, true);
    block(y_name, rtxt, "1", false);
    if (result.significant_at && *result.significant_at == 0.01)
        out << "**. Correlation is significant at the 0.01 level (2-tailed).\n";
    else if (result.significant_at && *result.significant_at == 0.05)
        out << "*. Correlation is significant at the 0.05 level (2-tailed).\n";
    return out.str();
}

std::string render_crosstab(const CrossTab& table) {
    std::ostringstream out;
    out << table.row_attribute << " * " << table.col_attribute << " Crosstabulation\n";

    std::size_t label_w = table.row_attribute.size();
    for (const auto& l : table.row_labels) label_w = std::max(label_w, l.size());
    label_w = std::max(label_w, std::string("Total").size()) + 2;

    std::size_t cell_w = 5;
    for (const auto& l : table.col_labels) cell_w = std::max(cell_w, l.size() + 1);

    out << std::setw(static_cast<int>(label_w)) << "";
    for (const auto& l : table.col_labels) out << std::setw(static_cast<int>(cell_w)) << l;
    out << std::setw(static_cast<int>(cell_w)) << "Total" << '\n';
    for (std::size_t i = 0; i < table.row_labels.size(); ++i) {
        out << std::setw(static_cast<int>(label_w)) << table.row_labels[i];
        for (std::size_t j = 0; j < table.col_labels.size(); ++j)
            out << std::setw(static_cast<int>(cell_w)) << table.cells[i][j];
        out << std::setw(static_cast<int>(cell_w)) << table.row_total(i) << '\n';
    }
    out << std::setw(static_cast<int>(label_w)) << "Total";
    for (std::size_t j = 0; j < table.col_labels.size(); ++j)
        out << std::setw(static_cast<int>(cell_w)) << table.col_total(j);
    out << std::setw(static_cast<int>(cell_w)) << table.grand_total() << '\n';
    return out.str();
}

} // namespace edm
