#include "telegraph/csv_io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

#include "telegraph/config.hpp"
#include "telegraph/error.hpp"

namespace telegraph {

std::string header_line(const CsvHeader& h) {
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(h.config_hash));
    return "# telegraph " + h.command + " config_hash=" + hash + " seed=" + std::to_string(h.seed) + "\n";
}

void write_field_csv(std::ostream& out, const FieldGrid& g, const CsvHeader& h) {
    out << header_line(h) << "t,A,F0,F1,F0_err,F1_err,source\n";
    const std::string src(to_string(g.source));
    for (std::size_t i = 0; i < g.times.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        for (std::size_t j = 0; j < g.positions.size(); ++j) {
            const auto c = static_cast<Eigen::Index>(j);
            out << format_number(g.times[i]) << ',' << format_number(g.positions[j]) << ','
                << format_number(g.F0(r, c)) << ',' << format_number(g.F1(r, c)) << ',';
            if (g.has_errors()) out << format_number((*g.F0_err)(r, c)) << ',' << format_number((*g.F1_err)(r, c));
            else out << ',';
            out << ',' << src << '\n';
        }
    }
}

void write_boundary_csv(std::ostream& out, const BoundarySeries& s, const CsvHeader& h) {
    out << header_line(h) << "t,phi,psi,omega,survival,source\n";
    const std::string src(to_string(s.source));
    for (std::size_t i = 0; i < s.size(); ++i)
        out << format_number(s.times[i]) << ',' << format_number(s.phi[i]) << ',' << format_number(s.psi[i]) << ','
            << format_number(s.omega[i]) << ',' << format_number(s.phi[i] + s.psi[i]) << ',' << src << '\n';
}

void write_transforms_csv(std::ostream& out, std::span<const BoundaryTransforms> rows, const CsvHeader& h) {
    out << header_line(h) << "m,psi_hat,omega_hat,phi_hat,residual\n";
    for (const BoundaryTransforms& t : rows)
        out << format_number(t.m.real()) << ',' << format_number(t.psi_hat.real()) << ','
            << format_number(t.omega_hat.real()) << ',' << format_number(t.phi_hat.real()) << ','
            << format_number(t.residual) << '\n';
}

void write_roots_csv(std::ostream& out, std::span<const SpectralRoots<double>> rows, const CsvHeader& h) {
    out << header_line(h) << "xi,q,m,n\n";
    for (const SpectralRoots<double>& r : rows)
        out << format_number(r.xi.real()) << ',' << format_number(r.q.real()) << ',' << format_number(r.m.real())
            << ',' << format_number(r.n.real()) << '\n';
}

void write_comparison_csv(std::ostream& out, std::span<const Metric> metrics, const CsvHeader& h) {
    out << header_line(h) << "metric,value,tolerance,pass\n";
    for (const Metric& m : metrics)
        out << m.name << ',' << format_number(m.value) << ',' << (m.tolerance ? format_number(*m.tolerance) : "")
            << ',' << (m.pass ? "true" : "false") << '\n';
}

namespace {

std::vector<std::string> fields_of(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(line);
    while (std::getline(in, cur, ',')) out.push_back(cur);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double number(const std::string& s, int line) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw Error(ErrorCode::IoError, "line " + std::to_string(line), "bad number '" + s + "'");
    return v;
}

std::size_t index_of(const std::vector<double>& axis, double v) {
    return static_cast<std::size_t>(std::lower_bound(axis.begin(), axis.end(), v) - axis.begin());
}

}  // namespace

FieldGrid read_field_csv(std::istream& in) {
    struct Row {
        double t, A, F0, F1;
        std::string e0, e1, source;
        int line;
    };
    std::vector<Row> rows;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {
            if (line != "t,A,F0,F1,F0_err,F1_err,source")
                throw Error(ErrorCode::IoError, "header", "not a field CSV: '" + line + "'");
            header_seen = true;
            continue;
        }
        const auto f = fields_of(line);
        if (f.size() != 7) throw Error(ErrorCode::IoError, "line " + std::to_string(line_no), "expected 7 columns");
        rows.push_back({number(f[0], line_no), number(f[1], line_no), number(f[2], line_no), number(f[3], line_no),
                        f[4], f[5], f[6], line_no});
    }
    if (!header_seen || rows.empty()) throw Error(ErrorCode::IoError, "field", "no data rows");

    FieldGrid g;
    for (const Row& r : rows) {
        g.times.push_back(r.t);
        g.positions.push_back(r.A);
    }
    for (auto* axis : {&g.times, &g.positions}) {
        std::sort(axis->begin(), axis->end());
        axis->erase(std::unique(axis->begin(), axis->end()), axis->end());
    }
    const auto nt = static_cast<Eigen::Index>(g.times.size());
    const auto na = static_cast<Eigen::Index>(g.positions.size());
    if (static_cast<std::size_t>(nt * na) != rows.size())
        throw Error(ErrorCode::IoError, "field", "rows do not form a full time x position grid");
    g.F0 = Matrix::Constant(nt, na, NAN);
    g.F1 = Matrix::Constant(nt, na, NAN);
    const bool with_err =
        std::all_of(rows.begin(), rows.end(), [](const Row& r) { return !r.e0.empty() && !r.e1.empty(); });
    if (with_err) {
        g.F0_err = Matrix::Zero(nt, na);
        g.F1_err = Matrix::Zero(nt, na);
    }
    const std::string source = rows.front().source;
    for (const Row& r : rows) {
        const auto i = static_cast<Eigen::Index>(index_of(g.times, r.t));
        const auto j = static_cast<Eigen::Index>(index_of(g.positions, r.A));
        g.F0(i, j) = r.F0;
        g.F1(i, j) = r.F1;
        if (with_err) {
            (*g.F0_err)(i, j) = number(r.e0, r.line);
            (*g.F1_err)(i, j) = number(r.e1, r.line);
        }
    }
    if (g.F0.hasNaN() || g.F1.hasNaN()) throw Error(ErrorCode::IoError, "field", "duplicate or missing grid points");
    if (source == "mc") g.source = Source::MonteCarlo;
    else if (source == "pde") g.source = Source::Pde;
    else if (source == "transform") g.source = Source::Transform;
    else throw Error(ErrorCode::IoError, "source", "unknown source '" + source + "'");
    for (Eigen::Index i = 0; i < nt; ++i) {
        g.boundary.push_back({g.F0(i, 0), g.F1(i, 0), g.F1(i, na - 1)});
        g.survival.push_back(g.F0(i, 0) + g.F1(i, 0));
    }
    return g;
}

}  // namespace telegraph
