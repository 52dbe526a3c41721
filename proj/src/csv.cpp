#include "pfaudit/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace pfaudit {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    for (char c : line) {
        if (c == ',') {
            out.push_back(field);
            field.clear();
        } else if (c != '\r') {
            field += c;
        }
    }
    out.push_back(field);
    return out;
}

double parse_number(const std::string& field, const std::string& origin,
                    std::size_t line_no, const std::string& column) {
    const char* begin = field.data();
    const char* end = begin + field.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    while (end != begin && (*(end - 1) == ' ' || *(end - 1) == '\t')) --end;
    double value = 0.0;
    auto res = std::from_chars(begin, end, value);
    if (res.ec != std::errc{} || res.ptr != end)
        throw ValidationError(origin + ":" + std::to_string(line_no) + ": column " + column +
                              ": cannot parse '" + field + "' as a number");
    return value;
}

} // namespace

RawTable parse_csv(const std::string& text, const std::string& origin) {
    RawTable table;
    std::istringstream in(text);
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line[0] == '#') continue;
        if (line.empty() || line == "\r") continue;
        auto fields = split_line(line);
        if (!have_header) {
            table.column_names = fields;
            table.columns.resize(fields.size());
            have_header = true;
            continue;
        }
        if (fields.size() != table.column_names.size())
            throw ValidationError(origin + ":" + std::to_string(line_no) + ": expected " +
                                  std::to_string(table.column_names.size()) + " fields, found " +
                                  std::to_string(fields.size()));
        for (std::size_t c = 0; c < fields.size(); ++c)
            table.columns[c].push_back(
                parse_number(fields[c], origin, line_no, table.column_names[c]));
        ++table.n_rows;
    }
    if (!have_header) throw ValidationError(origin + ": missing header row");
    return table;
}

RawTable read_csv_table(const std::string& path) {
    return parse_csv(read_text_file(path), path);
}

std::string dataset_to_csv(const Dataset& data, const std::vector<std::string>& provenance) {
    std::string out;
    for (const auto& note : provenance) out += "# " + note + "\n";
    out += "D,A,Y";
    for (const auto& name : data.covariate_names) out += "," + name;
    out += "\n";
    const auto n = data.n_rows();
    const auto m = static_cast<Eigen::Index>(data.n_features());
    for (std::size_t i = 0; i < n; ++i) {
        out += std::to_string(data.decision[i]);
        out += ',';
        out += std::to_string(data.attribute[i]);
        out += ',';
        out += std::to_string(data.outcome[i]);
        for (Eigen::Index j = 0; j < m; ++j) {
            out += ',';
            out += format_double(data.covariates(static_cast<Eigen::Index>(i), j));
        }
        out += '\n';
    }
    return out;
}

void write_dataset_csv(const std::string& path, const Dataset& data,
                       const std::vector<std::string>& provenance) {
    write_text_file(path, dataset_to_csv(data, provenance));
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open for writing: " + path);
    out << content;
    if (!out) throw IoError("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

} // namespace pfaudit
