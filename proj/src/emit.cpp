#include "damctl/emit.hpp"

#include <cstdio>
#include <fstream>
#include <ostream>

#include "damctl/errors.hpp"

namespace damctl {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

std::string to_csv(const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    auto append_row = [&out](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out += ',';
            out += row[i];
        }
        out += '\n';
    };
    append_row(header);
    for (const auto& row : rows) append_row(row);
    return out;
}

void write_output(const std::string& content, const std::optional<std::string>& path,
                  std::ostream& fallback) {
    if (!path) {
        fallback << content;
        return;
    }
    std::ofstream out(*path, std::ios::binary);
    if (!out) throw IoError("cannot open output file '" + *path + "'");
    out << content;
    if (!out) throw IoError("write failed for '" + *path + "'");
}

} // namespace damctl
