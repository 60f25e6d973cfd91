#include "aedet/trace_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace aedet {

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

void write_trace_csv(const LabeledTrace& trace, std::ostream& out) {
    out << "#dim=" << trace.samples.cols << "\n";
    for (std::size_t t = 0; t < trace.samples.rows; ++t) {
        out << trace.node_id << ',' << t << ',' << to_string(trace.labels[t])
            << ',' << (trace.valid_mask[t] ? 1 : 0);
        const double* row = trace.samples.row(t);
        for (std::size_t i = 0; i < trace.samples.cols; ++i)
            out << ',' << format_double(row[i]);
        out << '\n';
    }
}

void write_trace_csv(const LabeledTrace& trace, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    write_trace_csv(trace, out);
    if (!out) throw std::runtime_error("write failed: " + path);
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) fields.push_back(field);
    return fields;
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw std::invalid_argument("bad float field: " + s);
    return v;
}

}  // namespace

LabeledTrace read_trace_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line.rfind("#dim=", 0) != 0)
        throw std::invalid_argument("missing #dim= header");
    std::size_t dim = std::stoul(line.substr(5));

    LabeledTrace trace;
    std::vector<double> values;
    std::size_t rows = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        auto fields = split_csv(line);
        if (fields.size() != 4 + dim)
            throw std::invalid_argument("row has " + std::to_string(fields.size()) +
                                        " fields, expected " + std::to_string(4 + dim));
        if (rows == 0) trace.node_id = fields[0];
        trace.labels.push_back(governor_from_string(fields[2]));
        trace.valid_mask.push_back(fields[3] == "1");
        for (std::size_t i = 0; i < dim; ++i)
            values.push_back(parse_double(fields[4 + i]));
        ++rows;
    }
    trace.samples.rows = rows;
    trace.samples.cols = dim;
    trace.samples.data = std::move(values);
    return trace;
}

LabeledTrace read_trace_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open trace file: " + path);
    return read_trace_csv(in);
}

}  // namespace aedet
