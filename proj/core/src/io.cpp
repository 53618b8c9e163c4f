#include "clsel/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "clsel/error.hpp"
#include "clsel/random.hpp"

namespace clsel::io {

namespace {

std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ')) s.pop_back();
    std::size_t b = 0;
    while (b < s.size() && s[b] == ' ') ++b;
    return s.substr(b);
}

std::vector<std::string> split(const std::string& line, char delim) {
    std::vector<std::string> out;
    std::string field;
    std::stringstream ss(line);
    while (std::getline(ss, field, delim)) out.push_back(strip(field));
    if (!line.empty() && line.back() == delim) out.emplace_back();
    return out;
}

std::string where(std::size_t line, std::size_t col, const std::string& name) {
    std::ostringstream msg;
    msg << "line " << line << ", column " << col << " ('" << name << "')";
    return msg.str();
}

}  // namespace

std::size_t RawTable::missing_count() const {
    std::size_t c = 0;
    for (const auto& col : columns) c += static_cast<std::size_t>(std::count(col.begin(), col.end(), kMissing));
    return c;
}

RawTable load_table(std::istream& in, const ColumnRef& response_column) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    char delim = ',';
    while (std::getline(in, line)) {
        ++line_no;
        line = strip(line);
        if (line.empty() || line.front() == '#') continue;
        delim = line.find('\t') != std::string::npos ? '\t' : ',';
        header = split(line, delim);
        break;
    }
    if (header.empty()) throw ParseError("table has no header line");

    std::size_t response_pos = header.size();
    if (const auto* name = std::get_if<std::string>(&response_column)) {
        const auto it = std::find(header.begin(), header.end(), *name);
        if (it == header.end()) throw ParseError("response column '" + *name + "' not found in header");
        response_pos = static_cast<std::size_t>(it - header.begin());
    } else {
        const auto pos = std::get<std::size_t>(response_column);
        if (pos < 1 || pos > header.size()) {
            throw ParseError("response column position " + std::to_string(pos) + " outside 1.." +
                             std::to_string(header.size()));
        }
        response_pos = pos - 1;
    }

    RawTable table;
    table.response_name = header[response_pos];
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (c != response_pos) table.names.push_back(header[c]);
    }
    table.columns.resize(table.names.size());

    while (std::getline(in, line)) {
        ++line_no;
        const std::string trimmed = strip(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        const auto cells = split(trimmed, delim);
        if (cells.size() != header.size()) {
            std::ostringstream msg;
            msg << "line " << line_no << ": expected " << header.size() << " fields, found " << cells.size();
            throw ParseError(msg.str());
        }
        std::size_t j = 0;
        for (std::size_t c = 0; c < cells.size(); ++c) {
            const std::string& cell = cells[c];
            if (c == response_pos) {
                if (cell != "0" && cell != "1") {
                    throw ParseError(where(line_no, c + 1, header[c]) + ": response '" + cell +
                                     "' is not 0 or 1");
                }
                table.response.push_back(cell == "1" ? 1.0 : 0.0);
                continue;
            }
            std::int8_t v = kMissing;
            if (cell == "0") {
                v = 0;
            } else if (cell == "1") {
                v = 1;
            } else if (cell == "2") {
                v = 2;
            } else if (cell != "NA" && !cell.empty()) {
                throw ParseError(where(line_no, c + 1, header[c]) + ": cell '" + cell +
                                 "' is not 0, 1, 2 or NA");
            }
            table.columns[j++].push_back(v);
        }
    }
    if (table.response.empty()) throw ParseError("table has no data rows");
    return table;
}

RawTable load_table(const std::string& path, const ColumnRef& response_column) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path + "'");
    try {
        return load_table(in, response_column);
    } catch (const ParseError& e) {
        throw ParseError(path + ": " + e.what());
    }
}

RawTable impute(const RawTable& table, std::uint64_t seed, ImputationReport* report) {
    RawTable out = table;
    Rng rng(seed);
    ImputationReport local;
    local.imputed_per_column.assign(table.p(), 0);
    for (std::size_t j = 0; j < out.p(); ++j) {
        auto& col = out.columns[j];
        std::vector<std::int8_t> observed;
        for (auto v : col) {
            if (v != kMissing) observed.push_back(v);
        }
        if (observed.size() == col.size()) continue;
        if (observed.empty()) {
            throw InvalidDataset("column '" + table.names[j] + "' has no observed cells to impute from");
        }
        for (auto& v : col) {
            if (v == kMissing) {
                v = observed[uniform_index(rng, observed.size())];
                ++local.imputed_per_column[j];
                ++local.imputed_cells;
            }
        }
    }
    if (report) *report = std::move(local);
    return out;
}

RawTable drop_uninformative(const RawTable& table, bool drop_zero_variance, DropReport* report) {
    RawTable out;
    out.response = table.response;
    out.response_name = table.response_name;
    DropReport local;
    for (std::size_t j = 0; j < table.p(); ++j) {
        const auto& col = table.columns[j];
        const bool all_zero = std::all_of(col.begin(), col.end(), [](std::int8_t v) { return v == 0; });
        bool constant = true;
        for (auto v : col) {
            if (v != col.front()) {
                constant = false;
                break;
            }
        }
        if (all_zero || (drop_zero_variance && constant)) {
            local.dropped.push_back(j);
            local.dropped_names.push_back(table.names[j]);
            continue;
        }
        out.names.push_back(table.names[j]);
        out.columns.push_back(col);
    }
    if (report) *report = std::move(local);
    return out;
}

Dataset to_dataset(const RawTable& table) {
    const auto n = static_cast<Eigen::Index>(table.n());
    const auto p = static_cast<Eigen::Index>(table.p());
    Eigen::MatrixXd x(n, p);
    for (Eigen::Index j = 0; j < p; ++j) {
        const auto& col = table.columns[static_cast<std::size_t>(j)];
        for (Eigen::Index i = 0; i < n; ++i) {
            const auto v = col[static_cast<std::size_t>(i)];
            if (v == kMissing) {
                throw InvalidDataset("column '" + table.names[static_cast<std::size_t>(j)] +
                                     "' still has missing cells; impute first");
            }
            x(i, j) = v;
        }
    }
    Eigen::VectorXd y = Eigen::Map<const Eigen::VectorXd>(table.response.data(), n);
    const bool binary = (x.array() <= 1.0).all();
    return Dataset(std::move(x), std::move(y), table.names,
                   binary ? Encoding::binary : Encoding::ternary);
}

void write_table(std::ostream& out, const Dataset& dataset, const std::string& response_name) {
    for (std::size_t j = 0; j < dataset.p(); ++j) out << dataset.name(j) << ',';
    out << response_name << '\n';
    for (std::size_t i = 0; i < dataset.n(); ++i) {
        for (std::size_t j = 0; j < dataset.p(); ++j) {
            out << static_cast<int>(dataset.x()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)))
                << ',';
        }
        out << static_cast<int>(dataset.y()(static_cast<Eigen::Index>(i))) << '\n';
    }
}

Rgb genotype_colour(int code) {
    switch (code) {
        case 0: return {0, 158, 115};
        case 1: return {255, 255, 255};
        case 2: return {255, 105, 180};
        default: throw InvalidArgument("genotype code " + std::to_string(code) + " has no colour");
    }
}

void raster_export(std::ostream& out, const Dataset& dataset, const std::vector<std::size_t>& selected,
                   PixmapFormat format, const std::vector<std::string>& comments) {
    for (auto j : selected) {
        if (j >= dataset.p()) throw InvalidArgument("selected index out of range");
    }
    std::vector<std::size_t> rows;
    for (int group : {1, 0}) {
        for (std::size_t i = 0; i < dataset.n(); ++i) {
            if (static_cast<int>(dataset.y()(static_cast<Eigen::Index>(i))) == group) rows.push_back(i);
        }
    }
    out << (format == PixmapFormat::binary_p6 ? "P6" : "P3") << '\n';
    for (const auto& c : comments) out << "# " << c << '\n';
    out << selected.size() << ' ' << rows.size() << '\n' << 255 << '\n';
    for (auto i : rows) {
        for (std::size_t k = 0; k < selected.size(); ++k) {
            const auto code = static_cast<int>(
                dataset.x()(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(selected[k])));
            const Rgb c = genotype_colour(code);
            if (format == PixmapFormat::binary_p6) {
                out.put(static_cast<char>(c.r)).put(static_cast<char>(c.g)).put(static_cast<char>(c.b));
            } else {
                out << static_cast<int>(c.r) << ' ' << static_cast<int>(c.g) << ' ' << static_cast<int>(c.b)
                    << (k + 1 == selected.size() ? '\n' : ' ');
            }
        }
    }
    if (!out) throw IoError("failed writing pixmap");
}

void raster_export(const std::string& path, const Dataset& dataset, const std::vector<std::size_t>& selected,
                   PixmapFormat format, const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write '" + path + "'");
    raster_export(out, dataset, selected, format, comments);
}

}  // namespace clsel::io
