#include "msentropy/dataio.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace msentropy {

ParseError::ParseError(const std::string& what, std::size_t row, std::size_t column)
    : std::runtime_error([&] {
          std::string msg = what;
          if (row) msg += " (row " + std::to_string(row);
          if (row && column) msg += ", column " + std::to_string(column);
          if (row) msg += ")";
          return msg;
      }()),
      row_(row),
      column_(column) {}

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::vector<std::string_view> lines_of(std::string_view text) {
    auto lines = split(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    return lines;
}

// "# key = value" -> (key, value); nullopt for plain comments.
std::optional<std::pair<std::string, std::string>> parse_meta_line(std::string_view line) {
    std::string_view body = trim(line.substr(1));
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) return std::nullopt;
    return std::pair{std::string(trim(body.substr(0, eq))), std::string(trim(body.substr(eq + 1)))};
}

void check_field(const std::string& s, const char* what) {
    if (s.find_first_of(",\n\r") != std::string::npos) {
        throw InvalidParameter(std::string(what) + " '" + s + "' must not contain commas or newlines");
    }
}

std::string read_all(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("error reading '" + path.string() + "'");
    return ss.str();
}

void write_all(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    out << text;
    out.flush();
    if (!out) throw IoError("error writing '" + path.string() + "'");
}

std::string format_bool(bool b) { return b ? "true" : "false"; }

bool parse_bool(const std::string& s, const std::string& key) {
    if (s == "true") return true;
    if (s == "false") return false;
    throw ParseError("metadata '" + key + "' is not a boolean: '" + s + "'");
}

std::size_t parse_size(std::string_view text) {
    std::size_t v = 0;
    const auto t = trim(text);
    auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc{} || res.ptr != t.data() + t.size()) {
        throw ParseError("expected a non-negative integer, got '" + std::string(text) + "'");
    }
    return v;
}

std::optional<double> parse_optional(std::string_view text) {
    if (trim(text).empty()) return std::nullopt;
    return parse_double(text);
}

std::string format_optional(const std::optional<double>& v) { return v ? format_double(*v) : std::string{}; }

}  // namespace

// ---------------------------------------------------------------------------

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    const auto t = trim(text);
    double v = 0.0;
    // from_chars rejects a leading '+'.
    const char* first = t.data();
    if (!t.empty() && *first == '+') ++first;
    auto res = std::from_chars(first, t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v)) {
        throw ParseError("not a finite number: '" + std::string(text) + "'");
    }
    return v;
}

std::vector<double> parse_values(std::string_view text) {
    std::vector<double> out;
    for (auto item : split(text, ',')) {
        item = trim(item);
        if (item.empty()) throw ParseError("empty item in value list '" + std::string(text) + "'");
        if (const auto dots = item.find(".."); dots != std::string_view::npos) {
            const double a = parse_double(item.substr(0, dots));
            const double b = parse_double(item.substr(dots + 2));
            if (std::floor(a) != a || std::floor(b) != b || b < a) {
                throw ParseError("bad integer range '" + std::string(item) + "'");
            }
            for (double v = a; v <= b; v += 1.0) out.push_back(v);
        } else if (item.find(':') != std::string_view::npos) {
            const auto parts = split(item, ':');
            if (parts.size() != 3) throw ParseError("range must be start:step:stop, got '" + std::string(item) + "'");
            const double start = parse_double(parts[0]);
            const double step = parse_double(parts[1]);
            const double stop = parse_double(parts[2]);
            if (!(step > 0.0) || stop < start) throw ParseError("bad range '" + std::string(item) + "'");
            const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
            for (std::size_t i = 0; i < count; ++i) {
                // Round to 12 significant digits so 0.1:0.1:0.3 yields 0.3, not 0.30000000000000004.
                char buf[64];
                std::snprintf(buf, sizeof buf, "%.12g", start + static_cast<double>(i) * step);
                out.push_back(parse_double(buf));
            }
        } else {
            out.push_back(parse_double(item));
        }
    }
    return out;
}

std::vector<int> parse_int_values(std::string_view text) {
    std::vector<int> out;
    for (double v : parse_values(text)) {
        if (std::floor(v) != v) throw ParseError("expected integers in '" + std::string(text) + "'");
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::string format_values(const std::vector<double>& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ',';
        s += format_double(values[i]);
    }
    return s;
}

std::string format_int_values(const std::vector<int>& values) {
    // Contiguous runs collapse to "a..b".
    if (values.size() > 2) {
        bool contiguous = true;
        for (std::size_t i = 1; i < values.size(); ++i) contiguous &= values[i] == values[i - 1] + 1;
        if (contiguous) return std::to_string(values.front()) + ".." + std::to_string(values.back());
    }
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(values[i]);
    }
    return s;
}

// ---------------------------------------------------------------------------

MultichannelSeries parse_record(std::istream& in, const LoadOptions& options, const std::string& source) {
    std::optional<double> rate;
    std::vector<std::string> labels;
    std::vector<std::vector<double>> columns;
    bool have_header = false;
    std::size_t data_rows = 0;
    std::size_t kept = 0;
    std::size_t line_no = 0;
    std::string line;

    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view = line;
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (trim(view).empty()) continue;
        if (view.front() == '#') {
            if (auto kv = parse_meta_line(view); kv && kv->first == "sample_rate_hz") {
                try {
                    rate = parse_double(kv->second);
                } catch (const ParseError&) {
                    throw ParseError(source + ": bad sample_rate_hz '" + kv->second + "'", line_no);
                }
            }
            continue;
        }
        const auto fields = split(view, ',');
        if (!have_header) {
            for (auto f : fields) labels.emplace_back(trim(f));
            for (std::size_t c : options.columns) {
                if (c >= labels.size()) {
                    throw ParseError(source + ": column " + std::to_string(c + 1) + " selected but the file has " +
                                     std::to_string(labels.size()) + " columns", line_no);
                }
            }
            columns.resize(labels.size());
            have_header = true;
            continue;
        }
        if (fields.size() != labels.size()) {
            throw ParseError(source + ": expected " + std::to_string(labels.size()) + " values, found " +
                             std::to_string(fields.size()), line_no);
        }
        ++data_rows;
        if (data_rows <= options.offset) continue;
        if (options.max_rows && kept >= *options.max_rows) continue;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            try {
                columns[c].push_back(parse_double(fields[c]));
            } catch (const ParseError&) {
                throw ParseError(source + ": non-numeric value '" + std::string(trim(fields[c])) + "'",
                                 line_no, c + 1);
            }
        }
        ++kept;
    }
    if (in.bad()) throw IoError(source + ": read error");
    if (!have_header) throw IoError(source + ": empty record (no header row)");
    if (kept == 0) throw IoError(source + ": record has no data rows in the requested range");

    std::vector<Samples> chans;
    std::vector<std::string> labs;
    if (options.columns.empty()) {
        chans = std::move(columns);
        labs = std::move(labels);
    } else {
        for (std::size_t c : options.columns) {
            chans.push_back(columns[c]);
            labs.push_back(labels[c]);
        }
    }
    return MultichannelSeries(std::move(chans), std::move(labs), rate);
}

MultichannelSeries load_record(const std::filesystem::path& path, const LoadOptions& options) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    return parse_record(in, options, path.string());
}

std::string format_record(const MultichannelSeries& data,
                          const std::vector<std::pair<std::string, std::string>>& metadata) {
    std::string out;
    if (data.sample_rate_hz()) out += "# sample_rate_hz = " + format_double(*data.sample_rate_hz()) + "\n";
    for (const auto& [k, v] : metadata) out += "# " + k + " = " + v + "\n";
    for (std::size_t c = 0; c < data.channel_count(); ++c) {
        std::string label = data.labels().empty() ? "ch" + std::to_string(c + 1) : data.labels()[c];
        check_field(label, "channel label");
        if (c) out += ',';
        out += label;
    }
    out += '\n';
    for (std::size_t i = 0; i < data.length(); ++i) {
        for (std::size_t c = 0; c < data.channel_count(); ++c) {
            if (c) out += ',';
            out += format_double(data.channel(c)[i]);
        }
        out += '\n';
    }
    return out;
}

void write_record(const MultichannelSeries& data, const std::filesystem::path& path,
                  const std::vector<std::pair<std::string, std::string>>& metadata) {
    write_all(path, format_record(data, metadata));
}

// ---------------------------------------------------------------------------

std::optional<std::string> ResultFile::get(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    return std::nullopt;
}

const std::string& ResultFile::require(std::string_view key) const {
    for (const auto& [k, v] : metadata) {
        if (k == key) return v;
    }
    throw ParseError("result metadata lacks '" + std::string(key) + "'");
}

void ResultFile::set(std::string key, std::string value) {
    for (auto& [k, v] : metadata) {
        if (k == key) {
            v = std::move(value);
            return;
        }
    }
    metadata.emplace_back(std::move(key), std::move(value));
}

std::string ResultFile::data_text() const {
    std::string out;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out += ',';
        out += header[i];
    }
    out += '\n';
    for (const auto& row : rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    }
    return out;
}

std::string format_result(const ResultFile& result) {
    std::string out;
    for (const auto& [k, v] : result.metadata) {
        if (k.empty() || k.find('=') != std::string::npos || k.find('\n') != std::string::npos ||
            v.find('\n') != std::string::npos) {
            throw InvalidParameter("metadata entry '" + k + "' cannot be serialized");
        }
        out += "# " + k + " = " + v + "\n";
    }
    for (const auto& h : result.header) check_field(h, "column name");
    for (const auto& row : result.rows) {
        if (row.size() != result.header.size()) throw InvalidParameter("result row width differs from header");
        for (const auto& f : row) check_field(f, "field");
    }
    return out + result.data_text();
}

ResultFile parse_result(std::string_view text) {
    ResultFile r;
    bool have_header = false;
    std::size_t line_no = 0;
    for (auto line : lines_of(text)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!have_header && !line.empty() && line.front() == '#') {
            if (auto kv = parse_meta_line(line)) r.metadata.push_back(std::move(*kv));
            continue;
        }
        std::vector<std::string> fields;
        for (auto f : split(line, ',')) fields.emplace_back(f);
        if (!have_header) {
            r.header = std::move(fields);
            have_header = true;
            continue;
        }
        if (fields.size() != r.header.size()) {
            throw ParseError("expected " + std::to_string(r.header.size()) + " fields, found " +
                             std::to_string(fields.size()), line_no);
        }
        r.rows.push_back(std::move(fields));
    }
    if (!have_header) throw ParseError("result file has no header row");
    return r;
}

void write_result(const ResultFile& result, const std::filesystem::path& path) {
    write_all(path, format_result(result));
}

ResultFile read_result(const std::filesystem::path& path) {
    const std::string text = read_all(path);
    try {
        return parse_result(text);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what(), e.row(), e.column());
    }
}

// ---------------------------------------------------------------------------

namespace {

void expect_kind(const ResultFile& f, const std::string& kind, const std::vector<std::string>& header) {
    if (f.require("kind") != kind) throw ParseError("result kind is '" + f.require("kind") + "', expected '" + kind + "'");
    if (f.header != header) throw ParseError("unexpected columns for a " + kind + " result");
}

const std::vector<std::string> kCurveHeader{"scale", "entropy", "phi_m", "phi_m1"};
const std::vector<std::string> kEnsembleHeader{"sweep_value", "model", "scale", "mean", "std", "defined", "realizations"};
const std::vector<std::string> kTimingHeader{"value", "vemse_mean_s", "vemse_median_s", "mmse_mean_s",
                                             "mmse_median_s", "runs"};

}  // namespace

ResultFile curve_to_result(const EntropyCurve& curve) {
    ResultFile f;
    f.set("kind", "curve");
    f.set("radius", format_double(curve.radius));
    f.set("negative_values", format_bool(curve.has_negative()));
    f.header = kCurveHeader;
    for (const auto& p : curve.points) {
        f.rows.push_back({std::to_string(p.scale), format_optional(p.value), format_double(p.phi_m),
                          format_double(p.phi_m1)});
    }
    return f;
}

EntropyCurve curve_from_result(const ResultFile& file) {
    expect_kind(file, "curve", kCurveHeader);
    EntropyCurve c;
    c.radius = parse_double(file.require("radius"));
    for (const auto& row : file.rows) {
        CurvePoint p;
        p.scale = static_cast<int>(parse_size(row[0]));
        p.value = parse_optional(row[1]);
        p.phi_m = parse_double(row[2]);
        p.phi_m1 = parse_double(row[3]);
        c.points.push_back(p);
    }
    return c;
}

ResultFile ensemble_to_result(const EnsembleResult& result) {
    ResultFile f;
    f.set("kind", "ensemble");
    f.set("swept", to_string(result.swept));
    f.set("model_count", std::to_string(result.model_labels.size()));
    for (std::size_t i = 0; i < result.model_labels.size(); ++i) {
        f.set("model." + std::to_string(i), result.model_labels[i]);
    }
    f.header = kEnsembleHeader;
    for (const auto& p : result.points) {
        f.rows.push_back({format_double(p.sweep_value), std::to_string(p.model), std::to_string(p.scale),
                          format_optional(p.mean), format_double(p.std), std::to_string(p.defined),
                          std::to_string(p.realizations)});
    }
    return f;
}

EnsembleResult ensemble_from_result(const ResultFile& file) {
    expect_kind(file, "ensemble", kEnsembleHeader);
    EnsembleResult r;
    r.swept = parse_sweep_parameter(file.require("swept"));
    const std::size_t models = parse_size(file.require("model_count"));
    for (std::size_t i = 0; i < models; ++i) r.model_labels.push_back(file.require("model." + std::to_string(i)));
    for (const auto& row : file.rows) {
        EnsemblePoint p;
        p.sweep_value = parse_double(row[0]);
        p.model = parse_size(row[1]);
        p.scale = static_cast<int>(parse_size(row[2]));
        p.mean = parse_optional(row[3]);
        p.std = parse_double(row[4]);
        p.defined = parse_size(row[5]);
        p.realizations = parse_size(row[6]);
        if (p.model >= models) throw ParseError("model index out of range");
        r.points.push_back(p);
    }
    return r;
}

ResultFile timing_to_result(const TimingReport& report) {
    ResultFile f;
    f.set("kind", "timing");
    f.set("axis", to_string(report.axis));
    f.header = kTimingHeader;
    for (const auto& p : report.points) {
        f.rows.push_back({std::to_string(p.value), format_double(p.vemse_mean_s), format_double(p.vemse_median_s),
                          format_double(p.mmse_mean_s), format_double(p.mmse_median_s), std::to_string(p.runs)});
    }
    return f;
}

TimingReport timing_from_result(const ResultFile& file) {
    expect_kind(file, "timing", kTimingHeader);
    TimingReport r;
    r.axis = parse_bench_axis(file.require("axis"));
    for (const auto& row : file.rows) {
        TimingPoint p;
        p.value = static_cast<int>(parse_double(row[0]));
        p.vemse_mean_s = parse_double(row[1]);
        p.vemse_median_s = parse_double(row[2]);
        p.mmse_mean_s = parse_double(row[3]);
        p.mmse_median_s = parse_double(row[4]);
        p.runs = parse_size(row[5]);
        r.points.push_back(p);
    }
    return r;
}

void put_params(ResultFile& file, const EntropyParams& params) {
    file.set("m", std::to_string(params.m));
    file.set("lag", std::to_string(params.lag));
    file.set("scales", format_int_values(params.scales));
    file.set("tolerance_mode",
             params.tolerance.mode == ToleranceRule::Mode::Absolute ? "absolute" : "covariance_trace");
    file.set("r", format_double(params.tolerance.value));
    file.set("equal_template_count", format_bool(params.equal_template_count));
    file.set("per_scale_tolerance", format_bool(params.per_scale_tolerance));
    file.set("normalize", format_bool(params.normalize));
}

EntropyParams get_params(const ResultFile& file) {
    EntropyParams p;
    p.m = static_cast<int>(parse_size(file.require("m")));
    p.lag = static_cast<int>(parse_size(file.require("lag")));
    p.scales = parse_int_values(file.require("scales"));
    const auto& mode = file.require("tolerance_mode");
    if (mode == "absolute") {
        p.tolerance.mode = ToleranceRule::Mode::Absolute;
    } else if (mode == "covariance_trace") {
        p.tolerance.mode = ToleranceRule::Mode::CovarianceTrace;
    } else {
        throw ParseError("unknown tolerance_mode '" + mode + "'");
    }
    p.tolerance.value = parse_double(file.require("r"));
    p.equal_template_count = parse_bool(file.require("equal_template_count"), "equal_template_count");
    p.per_scale_tolerance = parse_bool(file.require("per_scale_tolerance"), "per_scale_tolerance");
    p.normalize = parse_bool(file.require("normalize"), "normalize");
    return p;
}

}  // namespace msentropy
