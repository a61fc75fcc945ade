#pragma once

// Command-line front end support: range parsing, measure flags, CSV/JSON
// rendering, and the command runners. Output is byte-identical across
// re-runs: rows are assembled by index and every number is printed with 17
// significant digits.

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "xyq/analysis.hpp"

namespace xyq::cli {

enum class Command { point, profile, grid, scan, validate };
enum class Format { csv, json };

struct RunConfig {
    Command command = Command::point;
    double gamma = 0.5;
    std::vector<double> a_values; // one entry for point/validate
    std::vector<double> t_values;
    MeasureFlags measures{true, true, false, false}; // ln,discord by default
    QuadratureSpec quad;
    BasisOptimizerOptions opt;
    ScanOptions scan;
    std::string output = "-";
    std::optional<Format> format; // defaulted per command when unset
    unsigned workers = 1;
    bool seedless = true;
};

// ---- parsing ------------------------------------------------------------

// `min:max:count_or_step`: an integer third field is a point count, a decimal
// one is a step. A bare number is a single-point range.
inline std::vector<double> parse_range(const std::string& text) {
    const auto bad = [&](const std::string& why) {
        throw std::invalid_argument("range '" + text + "': " + why);
    };
    std::vector<std::string> parts;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ':')) parts.push_back(token);
    const auto to_double = [&](const std::string& s) {
        try {
            std::size_t used = 0;
            const double v = std::stod(s, &used);
            if (used != s.size() || !std::isfinite(v)) bad("'" + s + "' is not a number");
            return v;
        } catch (const std::invalid_argument&) {
            bad("'" + s + "' is not a number");
        } catch (const std::out_of_range&) {
            bad("'" + s + "' is out of range");
        }
        return 0.0;
    };
    if (parts.size() == 1) return {to_double(parts[0])};
    if (parts.size() != 3) bad("expected min:max:count_or_step");
    const double lo = to_double(parts[0]);
    const double hi = to_double(parts[1]);
    if (hi < lo) bad("max is below min");
    const std::string& third = parts[2];
    const bool is_count = third.find_first_not_of("0123456789") == std::string::npos && !third.empty();
    std::vector<double> values;
    if (is_count) {
        const long n = std::stol(third);
        if (n < 1) bad("count must be >= 1");
        if (n == 1 && hi != lo) bad("count 1 needs min == max");
        values = linspace(lo, hi, static_cast<int>(n));
    } else {
        const double step = to_double(third);
        if (!(step > 0.0)) bad("step must be positive");
        const long n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
        values.reserve(static_cast<std::size_t>(n) + 1);
        for (long k = 0; k <= n; ++k) values.push_back(lo + k * step);
    }
    return values;
}

inline MeasureFlags parse_measures(const std::string& text) {
    MeasureFlags flags;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) {
        if (token == "ln") flags.ln = true;
        else if (token == "discord") flags.discord = true;
        else if (token == "deficit") flags.deficit = true;
        else if (token == "mi") flags.mi = true;
        else throw std::invalid_argument("unknown measure '" + token + "' (expected ln,discord,deficit,mi)");
    }
    if (!flags.ln && !flags.discord && !flags.deficit && !flags.mi)
        throw std::invalid_argument("no measures requested");
    return flags;
}

// ---- rendering ----------------------------------------------------------

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

inline std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        out += c;
        if (c == '"') out += '"';
    }
    out += '"';
    return out;
}

inline std::string json_string(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    out += '"';
    return out;
}

inline std::string opt17(const std::optional<double>& v) { return v ? fmt17(*v) : ""; }
inline std::string opt_json(const std::optional<double>& v) { return v ? fmt17(*v) : "null"; }

inline const char* point_csv_header() {
    return "a_tilde,t_tilde,gamma,ln,discord,deficit,mi,min_eig,status";
}

inline std::string point_csv_row(const PointResult& r) {
    const auto& p = r.point;
    std::string row = fmt17(p.a_tilde) + "," + fmt17(p.t_tilde) + "," + fmt17(p.gamma) + ",";
    row += opt17(p.ln) + "," + opt17(p.discord) + "," + opt17(p.deficit) + "," + opt17(p.mutual_info) + ",";
    row += r.error ? "" : fmt17(p.min_eigenvalue);
    row += ",";
    row += csv_field(r.error ? *r.error : "ok");
    return row;
}

inline std::string point_json_line(const PointResult& r) {
    const auto& p = r.point;
    std::string line = "{\"a_tilde\":" + fmt17(p.a_tilde) + ",\"t_tilde\":" + fmt17(p.t_tilde) +
                       ",\"gamma\":" + fmt17(p.gamma) + ",\"ln\":" + opt_json(p.ln) +
                       ",\"discord\":" + opt_json(p.discord) + ",\"deficit\":" + opt_json(p.deficit) +
                       ",\"mi\":" + opt_json(p.mutual_info) + ",\"min_eig\":";
    line += r.error ? "null" : fmt17(p.min_eigenvalue);
    line += ",\"status\":" + json_string(r.error ? *r.error : "ok") + "}";
    return line;
}

struct ScanRow {
    double t_tilde = 0.0;
    double gamma = 0.0;
    std::optional<CollapseRevivalRecord> record;
    std::optional<std::string> error;
};

inline const char* scan_csv_header() {
    return "t_tilde,gamma,a_c,slope,revived,max_ln_after_collapse,a_revival_peak,"
           "predicate_holds,exceptional_near_qpt,status";
}

inline std::string scan_status(const ScanRow& r) {
    if (r.error) return *r.error;
    return r.record ? "ok" : "no-collapse";
}

inline std::string scan_csv_row(const ScanRow& r) {
    std::string row = fmt17(r.t_tilde) + "," + fmt17(r.gamma) + ",";
    if (r.record) {
        const auto& rec = *r.record;
        row += opt17(rec.a_c) + "," + opt17(rec.slope) + ",";
        row += rec.revived ? "true" : "false";
        row += "," + fmt17(rec.max_ln_after_collapse) + "," + opt17(rec.a_revival_peak) + ",";
        row += rec.predicate_holds ? "true" : "false";
        row += ",";
        row += rec.exceptional_near_qpt ? "true" : "false";
    } else {
        row += ",,,,,,,";
    }
    row += "," + csv_field(scan_status(r));
    return row;
}

inline std::string scan_json_line(const ScanRow& r) {
    std::string line = "{\"t_tilde\":" + fmt17(r.t_tilde) + ",\"gamma\":" + fmt17(r.gamma);
    if (r.record) {
        const auto& rec = *r.record;
        line += ",\"a_c\":" + opt_json(rec.a_c) + ",\"slope\":" + opt_json(rec.slope);
        line += std::string(",\"revived\":") + (rec.revived ? "true" : "false");
        line += ",\"max_ln_after_collapse\":" + fmt17(rec.max_ln_after_collapse);
        line += ",\"a_revival_peak\":" + opt_json(rec.a_revival_peak);
        line += std::string(",\"predicate_holds\":") + (rec.predicate_holds ? "true" : "false");
        line += std::string(",\"exceptional_near_qpt\":") + (rec.exceptional_near_qpt ? "true" : "false");
    } else {
        line += ",\"a_c\":null,\"slope\":null,\"revived\":null,\"max_ln_after_collapse\":null,"
                "\"a_revival_peak\":null,\"predicate_holds\":null,\"exceptional_near_qpt\":null";
    }
    line += ",\"status\":" + json_string(scan_status(r)) + "}";
    return line;
}

// ---- command runners ----------------------------------------------------

namespace detail {

inline Format effective_format(const RunConfig& cfg) {
    if (cfg.format) return *cfg.format;
    switch (cfg.command) {
        case Command::point:
        case Command::validate: return Format::json;
        default: return Format::csv;
    }
}

class Progress {
public:
    Progress(const std::string& label, std::size_t total) : label_(label), total_(total) {
        std::cerr << "xyquench: " << label_ << ": " << total_ << " point(s)\n";
    }
    void tick() {
        const std::size_t done = ++done_;
        const std::size_t chunk = std::max<std::size_t>(1, total_ / 10);
        if (done % chunk == 0 || done == total_) {
            std::lock_guard<std::mutex> lock(mu_);
            std::cerr << "xyquench: " << label_ << ": " << done << "/" << total_ << "\n";
        }
    }

private:
    std::string label_;
    std::size_t total_;
    std::atomic<std::size_t> done_{0};
    std::mutex mu_;
};

} // namespace detail

// Runs the configured command, writing rows to `out` and one line per failed
// point to `errors`. Returns 0 on success, 2 if any point failed.
inline int run_command(const RunConfig& cfg, std::ostream& out, std::vector<std::string>& errors) {
    const Format format = detail::effective_format(cfg);

    auto emit_points = [&](const std::vector<PointResult>& cells) {
        if (format == Format::csv) out << point_csv_header() << "\n";
        for (const auto& c : cells) {
            out << (format == Format::csv ? point_csv_row(c) : point_json_line(c)) << "\n";
            if (c.error) {
                std::ostringstream os;
                os << "a_tilde=" << fmt17(c.point.a_tilde) << " t_tilde=" << fmt17(c.point.t_tilde)
                   << ": " << *c.error;
                errors.push_back(os.str());
            }
        }
    };

    switch (cfg.command) {
        case Command::point: {
            PointResult r;
            r.point.a_tilde = cfg.a_values.at(0);
            r.point.t_tilde = cfg.t_values.at(0);
            r.point.gamma = cfg.gamma;
            try {
                r.point = evaluate_point(cfg.gamma, cfg.a_values.at(0), cfg.t_values.at(0),
                                         cfg.measures, cfg.quad, cfg.opt);
            } catch (const std::exception& e) {
                r.error = e.what();
            }
            emit_points({r});
            break;
        }
        case Command::profile: {
            detail::Progress progress("profile", cfg.a_values.size());
            std::vector<PointResult> cells(cfg.a_values.size());
            xyq::detail::parallel_for(cfg.a_values.size(), cfg.workers, [&](std::size_t i) {
                cells[i].point.a_tilde = cfg.a_values[i];
                cells[i].point.t_tilde = cfg.t_values.at(0);
                cells[i].point.gamma = cfg.gamma;
                try {
                    cells[i].point = evaluate_point(cfg.gamma, cfg.a_values[i], cfg.t_values.at(0),
                                                    cfg.measures, cfg.quad, cfg.opt);
                } catch (const std::exception& e) {
                    cells[i].error = e.what();
                }
                progress.tick();
            });
            emit_points(cells);
            break;
        }
        case Command::grid: {
            detail::Progress progress("grid", cfg.a_values.size() * cfg.t_values.size());
            const std::size_t na = cfg.a_values.size();
            std::vector<PointResult> cells(na * cfg.t_values.size());
            xyq::detail::parallel_for(cells.size(), cfg.workers, [&](std::size_t idx) {
                const double a = cfg.a_values[idx % na];
                const double t = cfg.t_values[idx / na];
                cells[idx].point.a_tilde = a;
                cells[idx].point.t_tilde = t;
                cells[idx].point.gamma = cfg.gamma;
                try {
                    cells[idx].point = evaluate_point(cfg.gamma, a, t, cfg.measures, cfg.quad, cfg.opt);
                } catch (const std::exception& e) {
                    cells[idx].error = e.what();
                }
                progress.tick();
            });
            emit_points(cells);
            break;
        }
        case Command::scan: {
            detail::Progress progress("scan", cfg.t_values.size());
            std::vector<ScanRow> rows(cfg.t_values.size());
            xyq::detail::parallel_for(cfg.t_values.size(), cfg.workers, [&](std::size_t i) {
                rows[i].t_tilde = cfg.t_values[i];
                rows[i].gamma = cfg.gamma;
                try {
                    rows[i].record =
                        collapse_revival_record(cfg.t_values[i], cfg.gamma, cfg.quad, cfg.opt, cfg.scan);
                } catch (const std::exception& e) {
                    rows[i].error = e.what();
                }
                progress.tick();
            });
            if (format == Format::csv) out << scan_csv_header() << "\n";
            for (const auto& r : rows) {
                out << (format == Format::csv ? scan_csv_row(r) : scan_json_line(r)) << "\n";
                if (r.error) {
                    std::ostringstream os;
                    os << "t_tilde=" << fmt17(r.t_tilde) << ": " << *r.error;
                    errors.push_back(os.str());
                }
            }
            break;
        }
        case Command::validate: {
            const double a = cfg.a_values.at(0);
            const double t = cfg.t_values.at(0);
            std::optional<std::string> error;
            StateDiagnostics d{};
            try {
                d = xyq::validate(build_state(correlator_set({cfg.gamma, a, t}, cfg.quad)));
            } catch (const std::exception& e) {
                error = e.what();
            }
            const std::string status = error ? *error : "ok";
            if (format == Format::csv) {
                out << "a_tilde,t_tilde,gamma,hermiticity_defect,trace_defect,min_eigenvalue,"
                       "x_shape_defect,status\n";
                out << fmt17(a) << "," << fmt17(t) << "," << fmt17(cfg.gamma) << ",";
                if (error) out << ",,,";
                else
                    out << fmt17(d.hermiticity_defect) << "," << fmt17(d.trace_defect) << ","
                        << fmt17(d.min_eigenvalue) << "," << fmt17(d.x_shape_defect);
                out << "," << csv_field(status) << "\n";
            } else {
                out << "{\"a_tilde\":" << fmt17(a) << ",\"t_tilde\":" << fmt17(t)
                    << ",\"gamma\":" << fmt17(cfg.gamma);
                if (error)
                    out << ",\"hermiticity_defect\":null,\"trace_defect\":null,"
                           "\"min_eigenvalue\":null,\"x_shape_defect\":null";
                else
                    out << ",\"hermiticity_defect\":" << fmt17(d.hermiticity_defect)
                        << ",\"trace_defect\":" << fmt17(d.trace_defect)
                        << ",\"min_eigenvalue\":" << fmt17(d.min_eigenvalue)
                        << ",\"x_shape_defect\":" << fmt17(d.x_shape_defect);
                out << ",\"status\":" << json_string(status) << "}\n";
            }
            if (error) errors.push_back(*error);
            break;
        }
    }
    return errors.empty() ? 0 : 2;
}

// Opens the output target, runs the command, and writes the error sidecar
// (<output>.errors, or stderr when writing to stdout). Exit codes: 0 success,
// 1 configuration error, 2 per-point failures with partial output.
inline int run(const RunConfig& cfg) {
    if (!cfg.seedless) {
        std::cerr << "xyquench: error: the pipeline has no stochastic mode; --no-seedless is not supported\n";
        return 1;
    }
    std::ofstream file;
    const bool to_stdout = cfg.output == "-";
    if (!to_stdout) {
        file.open(cfg.output, std::ios::out | std::ios::trunc);
        if (!file) {
            std::cerr << "xyquench: error: cannot open output file '" << cfg.output << "'\n";
            return 1;
        }
    }
    std::ostream& out = to_stdout ? std::cout : file;
    std::vector<std::string> errors;
    int code = 0;
    try {
        code = run_command(cfg, out, errors);
    } catch (const std::invalid_argument& e) {
        std::cerr << "xyquench: error: " << e.what() << "\n";
        return 1;
    }
    out.flush();
    if (!errors.empty()) {
        if (to_stdout) {
            for (const auto& line : errors) std::cerr << "xyquench: point error: " << line << "\n";
        } else {
            std::ofstream sidecar(cfg.output + ".errors", std::ios::out | std::ios::trunc);
            for (const auto& line : errors) sidecar << line << "\n";
            std::cerr << "xyquench: " << errors.size() << " point(s) failed; see " << cfg.output
                      << ".errors\n";
        }
    }
    return code;
}

} // namespace xyq::cli
