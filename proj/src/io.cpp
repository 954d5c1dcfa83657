#include "ph/io.hpp"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "json.hpp"

namespace ph {

namespace {

std::string line_err(const std::string& path, std::size_t line, const std::string& what) {
    return path + ":" + std::to_string(line) + ": " + what;
}

bool blank_or_comment(const std::string& s) {
    for (char c : s) {
        if (c == '#') return true;
        if (!std::isspace(static_cast<unsigned char>(c))) return false;
    }
    return true;
}

std::vector<double> parse_row(const std::string& path, std::size_t lineno, const std::string& line) {
    std::vector<double> out;
    std::size_t pos = 0;
    while (pos <= line.size()) {
        std::size_t comma = line.find(',', pos);
        std::string cell = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                       : comma - pos);
        const char* begin = cell.c_str();
        char* end = nullptr;
        errno = 0;
        const double v = std::strtod(begin, &end);
        while (end && *end && std::isspace(static_cast<unsigned char>(*end))) ++end;
        if (end == begin || (end && *end))
            throw ParseError(line_err(path, lineno, "malformed number '" + cell + "'"));
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

Eigen::MatrixXd load_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (blank_or_comment(line)) continue;
        auto row = parse_row(path, lineno, line);
        if (!rows.empty() && row.size() != rows.front().size())
            throw ParseError(line_err(path, lineno,
                                      "expected " + std::to_string(rows.front().size()) +
                                          " columns, got " + std::to_string(row.size())));
        rows.push_back(std::move(row));
    }
    if (rows.empty()) throw ParseError(path + ": no data rows");
    Eigen::MatrixXd M(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j)
            M(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return M;
}

void write_rows(const Eigen::MatrixXd& M, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot open " + path + " for writing");
    for (Eigen::Index i = 0; i < M.rows(); ++i) {
        for (Eigen::Index j = 0; j < M.cols(); ++j) {
            if (j) out << ',';
            out << format_double(M(i, j));
        }
        out << '\n';
    }
    if (!out) throw DataError("write to " + path + " failed");
}

void put_u64(std::ofstream& out, std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
    out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::ifstream& in, const std::string& path) {
    unsigned char b[8];
    if (!in.read(reinterpret_cast<char*>(b), 8))
        throw ParseError(path + ": truncated header");
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
}

}  // namespace

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

PointCloud load_points_csv(const std::string& path) {
    PointCloud X;
    X.points = load_rows(path);
    return X;
}

void save_points_csv(const PointCloud& X, const std::string& path) {
    write_rows(X.points, path);
}

PointCloud load_points_binary(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    char magic[4];
    if (!in.read(magic, 4) || std::memcmp(magic, "PCF1", 4) != 0)
        throw ParseError(path + ": bad magic, expected PCF1");
    const std::uint64_t n = get_u64(in, path);
    const std::uint64_t m = get_u64(in, path);
    if (n > (1ull << 32) || m > (1ull << 16))
        throw ParseError(path + ": implausible header counts");
    PointCloud X;
    X.points.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    for (std::uint64_t i = 0; i < n; ++i)
        for (std::uint64_t j = 0; j < m; ++j) {
            unsigned char b[8];
            if (!in.read(reinterpret_cast<char*>(b), 8))
                throw ParseError(path + ": truncated payload at point " + std::to_string(i));
            std::uint64_t bits = 0;
            for (int k = 0; k < 8; ++k) bits |= static_cast<std::uint64_t>(b[k]) << (8 * k);
            double v;
            std::memcpy(&v, &bits, 8);
            X.points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
        }
    return X;
}

void save_points_binary(const PointCloud& X, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out.write("PCF1", 4);
    put_u64(out, static_cast<std::uint64_t>(X.points.rows()));
    put_u64(out, static_cast<std::uint64_t>(X.points.cols()));
    for (Eigen::Index i = 0; i < X.points.rows(); ++i)
        for (Eigen::Index j = 0; j < X.points.cols(); ++j) {
            std::uint64_t bits;
            const double v = X.points(i, j);
            std::memcpy(&bits, &v, 8);
            put_u64(out, bits);
        }
    if (!out) throw DataError("write to " + path + " failed");
}

FiniteMetricSpace load_distance_csv(const std::string& path) {
    Eigen::MatrixXd M = load_rows(path);
    if (M.rows() != M.cols())
        throw ParseError(path + ": distance matrix is " + std::to_string(M.rows()) + "x" +
                         std::to_string(M.cols()) + ", expected square");
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = i + 1; j < M.cols(); ++j)
            if (M(i, j) != M(j, i))
                throw ParseError(path + ": dist[" + std::to_string(i) + "][" + std::to_string(j) +
                                 "] != dist[" + std::to_string(j) + "][" + std::to_string(i) + "]");
    FiniteMetricSpace S;
    S.dist = std::move(M);
    validate_metric(S);
    return S;
}

void save_distance_csv(const Eigen::MatrixXd& dist, const std::string& path) {
    write_rows(dist, path);
}

std::string diagram_to_json(const PersistenceDiagram& D) {
    std::string s = "{\"hom_dim\": " + std::to_string(D.hom_dim) + ", \"points\": [";
    for (std::size_t i = 0; i < D.points.size(); ++i) {
        if (i) s += ", ";
        s += "[" + format_double(D.points[i].birth) + ", " + format_double(D.points[i].death) +
             ", " + std::to_string(D.points[i].multiplicity) + "]";
    }
    s += "], \"essential\": [";
    for (std::size_t i = 0; i < D.essential.size(); ++i) {
        if (i) s += ", ";
        s += format_double(D.essential[i]);
    }
    s += "]}";
    return s;
}

std::string measure_to_json(const PersistenceMeasure& mu) {
    std::string s = "{\"hom_dim\": " + std::to_string(mu.hom_dim) + ", \"atoms\": [";
    for (std::size_t i = 0; i < mu.atoms.size(); ++i) {
        if (i) s += ", ";
        s += "[" + format_double(mu.atoms[i].x) + ", " + format_double(mu.atoms[i].y) + ", " +
             format_double(mu.atoms[i].mass) + "]";
    }
    s += "], \"mass_denominator\": ";
    s += mu.mass_denominator ? std::to_string(*mu.mass_denominator) : std::string("null");
    s += "}";
    return s;
}

namespace {

nlohmann::json parse_json(const std::string& text, const std::string& origin) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

}  // namespace

PersistenceDiagram diagram_from_json(const std::string& text, const std::string& origin) {
    const auto j = parse_json(text, origin);
    try {
        std::vector<DiagramPoint> points;
        for (const auto& row : j.at("points")) {
            if (row.size() != 3) throw ParseError(origin + ": diagram point needs [birth, death, mult]");
            points.push_back({row[0].get<double>(), row[1].get<double>(),
                              row[2].get<std::int64_t>()});
        }
        std::vector<double> essential;
        for (const auto& b : j.at("essential")) essential.push_back(b.get<double>());
        return make_diagram(j.at("hom_dim").get<int>(), std::move(points), std::move(essential));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

PersistenceMeasure measure_from_json(const std::string& text, const std::string& origin) {
    const auto j = parse_json(text, origin);
    try {
        std::vector<MeasureAtom> atoms;
        for (const auto& row : j.at("atoms")) {
            if (row.size() != 3) throw ParseError(origin + ": measure atom needs [x, y, mass]");
            atoms.push_back({row[0].get<double>(), row[1].get<double>(), row[2].get<double>()});
        }
        std::optional<std::int64_t> denom;
        if (j.contains("mass_denominator") && !j.at("mass_denominator").is_null())
            denom = j.at("mass_denominator").get<std::int64_t>();
        return make_measure(j.at("hom_dim").get<int>(), std::move(atoms), denom);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(origin + ": " + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open " + path + " for writing");
    out << content;
    if (!out) throw DataError("write to " + path + " failed");
}

PersistenceDiagram load_diagram_json(const std::string& path) {
    return diagram_from_json(read_text_file(path), path);
}

void save_diagram_json(const PersistenceDiagram& D, const std::string& path) {
    write_text_file(path, diagram_to_json(D) + "\n");
}

PersistenceMeasure load_measure_json(const std::string& path) {
    return measure_from_json(read_text_file(path), path);
}

void save_measure_json(const PersistenceMeasure& mu, const std::string& path) {
    write_text_file(path, measure_to_json(mu) + "\n");
}

}  // namespace ph
