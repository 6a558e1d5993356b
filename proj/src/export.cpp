#include "bipdb/export.hpp"

#include <algorithm>
#include <array>
#include <cstring>
#include <numeric>
#include <stdexcept>

#include "bipdb/errors.hpp"
#include "bipdb/numbers.hpp"
#include "bipdb/text_io.hpp"

namespace bipdb {

namespace {

bool valid_graph_id(std::string_view id) {
    if (id.empty()) return false;
    for (char c : id) {
        const bool ok = (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
        if (!ok) return false;
    }
    return true;
}

// Ordered parameter keys per measure; the filename grammar depends on both
// the set and the order being fixed.
std::vector<std::string_view> param_keys(Measure m) {
    switch (m) {
    case Measure::CC: return {};
    case Measure::ICC: return {"y"};
    case Measure::PR: return {"a", "error"};
    case Measure::RAM: return {"g", "tc"};
    case Measure::AttRank: return {"a", "b", "g", "rho", "w", "tc", "error"};
    }
    throw std::invalid_argument("unknown measure");
}

std::string param_value(Measure m, std::string_view key, const MeasureParams& p) {
    if (m == Measure::ICC && key == "y") return std::to_string(p.icc_window);
    if (m == Measure::PR && key == "a") return format_double_shortest(p.pr_alpha);
    if (m == Measure::RAM && key == "g") return format_double_shortest(p.ram_gamma);
    if (m == Measure::AttRank) {
        if (key == "a") return format_double_shortest(p.att_alpha);
        if (key == "b") return format_double_shortest(p.att_beta);
        if (key == "g") return format_double_shortest(p.att_gamma);
        if (key == "rho") return format_double_shortest(p.att_rho);
        if (key == "w") return std::to_string(p.resolved_att_window());
    }
    if (key == "tc") return std::to_string(p.current_year);
    if (key == "error") return format_double_shortest(p.pr_epsilon);
    throw std::invalid_argument("unknown parameter key");
}

// Applies one parsed "keyvalue" token; false when the value does not parse.
bool apply_param(Measure m, std::string_view key, std::string_view value, MeasureParams& p) {
    const auto as_int = [&](int32_t& field) {
        const auto v = parse_int(value);
        if (!v) return false;
        field = static_cast<int32_t>(*v);
        return true;
    };
    const auto as_double = [&](double& field) {
        const auto v = parse_double(value);
        if (!v) return false;
        field = *v;
        return true;
    };
    if (m == Measure::ICC && key == "y") return as_int(p.icc_window);
    if (m == Measure::PR && key == "a") return as_double(p.pr_alpha);
    if (m == Measure::RAM && key == "g") return as_double(p.ram_gamma);
    if (m == Measure::AttRank) {
        if (key == "a") return as_double(p.att_alpha);
        if (key == "b") return as_double(p.att_beta);
        if (key == "g") return as_double(p.att_gamma);
        if (key == "rho") return as_double(p.att_rho);
        if (key == "w") return as_int(p.att_window);
    }
    if (key == "tc") return as_int(p.current_year);
    if (key == "error") return as_double(p.pr_epsilon);
    return false;
}

} // namespace

std::string dump_filename(const DumpSpec& spec) {
    if (!valid_graph_id(spec.graph_id))
        throw std::invalid_argument("graph id must match [a-z0-9_]+: \"" + spec.graph_id + "\"");
    std::string name(measure_tag(spec.measure));
    name += '_';
    name += spec.graph_id;
    for (std::string_view key : param_keys(spec.measure)) {
        name += '_';
        name += key;
        name += param_value(spec.measure, key, spec.params);
    }
    name += spec.compressed ? ".tsv.gz" : ".tsv";
    return name;
}

std::vector<std::pair<std::string, std::string>> dump_param_list(const DumpSpec& spec) {
    std::vector<std::pair<std::string, std::string>> out;
    for (std::string_view key : param_keys(spec.measure))
        out.emplace_back(std::string(key), param_value(spec.measure, key, spec.params));
    return out;
}

std::optional<DumpSpec> parse_dump_filename(const std::filesystem::path& path) {
    std::string name = path.filename().string();

    DumpSpec spec;
    if (name.ends_with(".tsv.gz")) {
        spec.compressed = true;
        name.resize(name.size() - 7);
    } else if (name.ends_with(".tsv")) {
        spec.compressed = false;
        name.resize(name.size() - 4);
    } else {
        return std::nullopt;
    }

    const size_t tag_end = name.find('_');
    if (tag_end == std::string::npos) return std::nullopt;
    const auto measure = parse_measure(name.substr(0, tag_end));
    if (!measure) return std::nullopt;
    spec.measure = *measure;
    std::string_view rest = std::string_view(name).substr(tag_end + 1);

    // Parameter tokens, last key first; what remains on the left is the
    // graph id, underscores and all.
    const std::vector<std::string_view> keys = param_keys(spec.measure);
    for (auto key = keys.rbegin(); key != keys.rend(); ++key) {
        const size_t sep = rest.rfind('_');
        if (sep == std::string_view::npos) return std::nullopt;
        std::string_view token = rest.substr(sep + 1);
        if (!token.starts_with(*key)) return std::nullopt;
        if (!apply_param(spec.measure, *key, token.substr(key->size()), spec.params))
            return std::nullopt;
        rest = rest.substr(0, sep);
    }
    if (!valid_graph_id(rest)) return std::nullopt;
    spec.graph_id.assign(rest);
    return spec;
}

std::filesystem::path write_dump(const ScoreVector& sv, const CitationGraph& g,
                                 const DumpSpec& spec, const std::filesystem::path& dir) {
    const uint32_t n = g.node_count();
    if (sv.scores.size() != n)
        throw std::invalid_argument("score vector does not match the graph");

    std::vector<uint32_t> order(n);
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](uint32_t a, uint32_t b) {
        if (sv.scores[a] != sv.scores[b]) return sv.scores[a] > sv.scores[b];
        return g.doi(a) < g.doi(b);
    });

    const std::filesystem::path out = dir / dump_filename(spec);
    TextWriter w(out, spec.compressed);
    std::string line;
    for (uint32_t id : order) {
        const std::string_view doi = g.doi(id);
        if (doi.find('\t') != std::string_view::npos)
            throw ConsistencyError("DOI contains a tab and cannot be dumped: \"" +
                                   std::string(doi) + "\"");
        line.assign(doi);
        line += '\t';
        line += format_double_17(sv.scores[id]);
        line += '\n';
        w.write(line);
    }
    w.close();
    return out;
}

std::filesystem::path convert_dump(const std::filesystem::path& dump,
                                   const std::filesystem::path& out_dir, bool compressed) {
    auto spec = parse_dump_filename(dump);
    if (!spec)
        throw ConsistencyError("not a recognizable dump name: " + dump.string());
    spec->compressed = compressed;
    const std::filesystem::path out = out_dir / dump_filename(*spec);
    std::error_code ec;
    if (std::filesystem::exists(out, ec) && std::filesystem::equivalent(dump, out, ec) && !ec)
        return out; // same directory and compression: writing would clobber the input

    TextReader r(dump);
    TextWriter w(out, compressed);
    std::string line;
    while (r.next_line(line)) {
        line += '\n';
        w.write(line);
    }
    w.close();
    return out;
}

std::vector<DumpEntry> read_dump(const std::filesystem::path& path) {
    TextReader r(path);
    std::vector<DumpEntry> out;
    std::string line;
    while (r.next_line(line)) {
        const size_t tab = line.find('\t');
        if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos)
            throw ParseError(path.string() + ": expected two tab-separated columns",
                             r.line_number());
        const auto score = parse_double(std::string_view(line).substr(tab + 1));
        if (!score)
            throw ParseError(path.string() + ": unreadable score", r.line_number());
        out.push_back({Doi{line.substr(0, tab)}, *score});
    }
    return out;
}

} // namespace bipdb
