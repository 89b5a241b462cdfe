#include "optirec/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "optirec/errors.hpp"

namespace optirec {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

void require_stream(const std::ofstream& f, const std::string& path) {
    if (!f) throw DomainError("cannot open '" + path + "' for writing");
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_field(const std::string& field, const std::string& path, int row) {
    const char* begin = field.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    while (end && *end == ' ') ++end;
    if (end == begin || (end && *end != '\0'))
        throw DomainError(path + ": row " + std::to_string(row) +
                          ": cannot parse number '" + field + "'");
    return v;
}

struct Table {
    std::vector<std::vector<double>> rows;
};

Table read_table(const std::string& path, const std::string& header, int columns) {
    std::ifstream f(path);
    if (!f) throw DomainError("cannot open '" + path + "' for reading");
    std::string line;
    if (!std::getline(f, line)) throw DomainError(path + ": empty file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != header)
        throw DomainError(path + ": row 1: expected header '" + header + "', got '" +
                          line + "'");
    Table t;
    int row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (line.empty() || line == "\r") continue;
        const auto fields = split_fields(line);
        if (static_cast<int>(fields.size()) != columns)
            throw DomainError(path + ": row " + std::to_string(row) + ": expected " +
                              std::to_string(columns) + " fields, got " +
                              std::to_string(fields.size()));
        std::vector<double> vals(columns);
        for (int c = 0; c < columns; ++c) vals[c] = parse_field(fields[c], path, row);
        t.rows.push_back(std::move(vals));
    }
    return t;
}

bool power_of_two(std::size_t n) { return n > 0 && (n & (n - 1)) == 0; }

// Rebuilds a uniform centered axis from the first column; the grid start
// must be -max, spacing constant to 1e-9 relative.
void check_axis(const Table& t, const std::string& path, double& max_abs, int& n) {
    n = static_cast<int>(t.rows.size());
    if (!power_of_two(t.rows.size()) || n < 8)
        throw DomainError(path + ": need a power-of-two number of rows >= 8, got " +
                          std::to_string(n));
    const double start = t.rows[0][0];
    if (!(start < 0.0)) throw DomainError(path + ": axis must start below zero");
    max_abs = -start;
    const double spacing = 2.0 * max_abs / n;
    const double tol = 1e-9 * std::max(1.0, max_abs);
    for (int j = 0; j < n; ++j) {
        const double expected = start + j * spacing;
        if (std::fabs(t.rows[j][0] - expected) > tol)
            throw DomainError(path + ": row " + std::to_string(j + 2) +
                              ": axis value " + format_double(t.rows[j][0]) +
                              " breaks uniform spacing (expected " +
                              format_double(expected) + ")");
    }
}

}  // namespace

void write_spectrum_csv(const Spectrum& s, const std::string& path) {
    if (static_cast<int>(s.values.size()) != s.grid.n)
        throw DomainError("spectrum length does not match grid");
    std::ofstream f(path);
    require_stream(f, path);
    f << "omega,re,im\n";
    for (int j = 0; j < s.grid.n; ++j)
        f << format_double(s.grid.frequency(j)) << ','
          << format_double(s.values[j].real()) << ','
          << format_double(s.values[j].imag()) << '\n';
    if (!f) throw DomainError("write to '" + path + "' failed");
}

Spectrum read_spectrum_csv(const std::string& path) {
    const Table t = read_table(path, "omega,re,im", 3);
    double freq_max = 0;
    int n = 0;
    check_axis(t, path, freq_max, n);
    Spectrum s;
    s.grid = FrequencyGrid(n, freq_max);
    s.values.resize(n);
    for (int j = 0; j < n; ++j) s.values[j] = {t.rows[j][1], t.rows[j][2]};
    s.hermitian = check_hermitian(s);
    return s;
}

void write_signal_csv(const SignalSamples& x, const std::string& path) {
    if (static_cast<int>(x.values.size()) != x.n)
        throw DomainError("signal length does not match sample count");
    std::ofstream f(path);
    require_stream(f, path);
    f << "t,value\n";
    for (int m = 0; m < x.n; ++m)
        f << format_double(x.time(m)) << ',' << format_double(x.values[m]) << '\n';
    if (!f) throw DomainError("write to '" + path + "' failed");
}

SignalSamples read_signal_csv(const std::string& path) {
    const Table t = read_table(path, "t,value", 2);
    double t_max = 0;
    int n = 0;
    check_axis(t, path, t_max, n);
    SignalSamples x;
    x.n = n;
    x.t_max = t_max;
    x.values.resize(n);
    for (int m = 0; m < n; ++m) x.values[m] = t.rows[m][1];
    return x;
}

namespace {

std::string json_field(const DerivativeProblem& p) {
    return "{\"kind\":\"derivative\",\"r\":" + std::to_string(p.r) +
           ",\"k\":" + std::to_string(p.k) + ",\"delta\":" + format_double(p.delta) +
           "}";
}

std::string json_field(const HeatProblem& p) {
    return "{\"kind\":\"heat\",\"r\":" + std::to_string(p.r) +
           ",\"T\":" + format_double(p.T) + ",\"delta\":" + format_double(p.delta) +
           "}";
}

}  // namespace

std::string problem_json(const AnyProblem& p) {
    return std::visit([](const auto& q) { return json_field(q); }, p);
}

std::string to_json(const SimulationReport& r) {
    std::ostringstream out;
    out << "{\n"
        << "  \"problem\": " << problem_json(r.problem) << ",\n"
        << "  \"grid\": {\"n\": " << r.grid.n
        << ", \"freq_max\": " << format_double(r.grid.freq_max) << "},\n"
        << "  \"trials\": " << r.trials << ",\n"
        << "  \"seed\": " << r.seed << ",\n"
        << "  \"empirical_rmse\": " << format_double(r.empirical_rmse) << ",\n"
        << "  \"rmse_stderr\": " << format_double(r.rmse_stderr) << ",\n"
        << "  \"theoretical_error\": " << format_double(r.theoretical_error) << "\n"
        << "}\n";
    return out.str();
}

std::string to_json(const std::vector<CertificateRow>& rows, const AnyProblem& p,
                    double A) {
    std::ostringstream out;
    out << "{\n"
        << "  \"problem\": " << problem_json(p) << ",\n"
        << "  \"A\": " << format_double(A) << ",\n"
        << "  \"rows\": [\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out << "    {\"N\": " << rows[i].N << ", \"bound\": "
            << format_double(rows[i].bound)
            << ", \"ratio\": " << format_double(rows[i].ratio) << "}"
            << (i + 1 < rows.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
    return out.str();
}

}  // namespace optirec
