#ifndef MRSNE_IO_HPP
#define MRSNE_IO_HPP

#include <cerrno>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "mrsne/errors.hpp"
#include "mrsne/metrics.hpp"
#include "mrsne/types.hpp"

namespace mrsne {

namespace detail {

inline std::string format_value(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline std::vector<std::string> split_tokens(const std::string& line) {
    std::vector<std::string> tokens;
    std::istringstream in(line);
    std::string token;
    while (in >> token) tokens.push_back(std::move(token));
    return tokens;
}

inline double parse_value(const std::string& token, const std::string& path, Index line) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(token.c_str(), &end);
    if (end != token.c_str() + token.size() || errno == ERANGE)
        throw ParseError(path, line, "cannot parse number '" + token + "'");
    if (!std::isfinite(v))
        throw ParseError(path, line, "value '" + token + "' is not finite");
    return v;
}

inline long long parse_integer(const std::string& token, const std::string& path, Index line) {
    errno = 0;
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end != token.c_str() + token.size() || errno == ERANGE)
        throw ParseError(path, line, "cannot parse integer '" + token + "'");
    return v;
}

inline std::ifstream open_for_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError(path, 0, "cannot open file");
    return in;
}

inline std::ofstream open_for_write(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write to " + path);
    return out;
}

} // namespace detail

/// Dense matrix file: a "rows cols" header line, then one line of
/// space-separated decimal values per row.
template <typename Scalar = double>
Matrix<Scalar> load_matrix(const std::string& path) {
    std::ifstream in = detail::open_for_read(path);
    std::string line;
    Index lineno = 0;

    if (!std::getline(in, line)) throw ParseError(path, 1, "missing header");
    ++lineno;
    const auto header = detail::split_tokens(line);
    if (header.size() != 2) throw ParseError(path, lineno, "header must be 'rows cols'");
    const long long rows = detail::parse_integer(header[0], path, lineno);
    const long long cols = detail::parse_integer(header[1], path, lineno);
    if (rows < 0 || cols < 0) throw ParseError(path, lineno, "negative dimension");

    Matrix<Scalar> out(rows, cols);
    for (long long r = 0; r < rows; ++r) {
        if (!std::getline(in, line))
            throw DimensionMismatch(path + ": header says " + std::to_string(rows) +
                                    " rows, file has " + std::to_string(r));
        ++lineno;
        const auto tokens = detail::split_tokens(line);
        if (static_cast<long long>(tokens.size()) != cols)
            throw DimensionMismatch(path + ":" + std::to_string(lineno) + ": expected " +
                                    std::to_string(cols) + " values, got " +
                                    std::to_string(tokens.size()));
        for (long long c = 0; c < cols; ++c)
            out(r, c) = Scalar(detail::parse_value(tokens[c], path, lineno));
    }
    while (std::getline(in, line)) {
        ++lineno;
        if (!detail::split_tokens(line).empty())
            throw DimensionMismatch(path + ":" + std::to_string(lineno) +
                                    ": more rows than the header declares");
    }
    return out;
}

template <typename Scalar>
void save_matrix(const Matrix<Scalar>& m, const std::string& path) {
    std::ofstream out = detail::open_for_write(path);
    out << m.rows() << ' ' << m.cols() << '\n';
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            if (c) out << ' ';
            out << detail::format_value(double(m(r, c)));
        }
        out << '\n';
    }
}

/// Sparse cross graph as "i j w" triplet lines with 0-based indices and
/// strictly positive weights; each pair may appear once.
template <typename Scalar = double>
SparseGraph<Scalar> load_cross_graph(const std::string& path, Eigen::Index n1, Eigen::Index n2) {
    std::ifstream in = detail::open_for_read(path);
    std::string line;
    Index lineno = 0;

    std::vector<Eigen::Triplet<Scalar>> triplets;
    std::set<std::pair<Index, Index>> seen;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = detail::split_tokens(line);
        if (tokens.empty()) continue;
        if (tokens.size() != 3) throw ParseError(path, lineno, "expected 'i j w'");
        const long long i = detail::parse_integer(tokens[0], path, lineno);
        const long long j = detail::parse_integer(tokens[1], path, lineno);
        const double w = detail::parse_value(tokens[2], path, lineno);
        if (i < 0 || i >= n1 || j < 0 || j >= n2) throw IndexOutOfRange(i, j);
        if (!(w > 0)) throw NonPositiveWeight(i, j);
        if (!seen.emplace(i, j).second) throw DuplicateEntry(i, j);
        triplets.emplace_back(i, j, Scalar(w));
    }
    SparseGraph<Scalar> graph(n1, n2);
    graph.setFromTriplets(triplets.begin(), triplets.end());
    return graph;
}

template <typename Scalar>
void save_cross_graph(const SparseGraph<Scalar>& graph, const std::string& path) {
    std::ofstream out = detail::open_for_write(path);
    for (Eigen::Index outer = 0; outer < graph.outerSize(); ++outer)
        for (typename SparseGraph<Scalar>::InnerIterator it(graph, outer); it; ++it)
            out << it.row() << ' ' << it.col() << ' '
                << detail::format_value(double(it.value())) << '\n';
}

/// Embedding file: one "domain index coord..." line per item, domain 1 rows
/// first, both domains in index order.
template <typename Scalar>
void save_embedding(const Embedding<Scalar>& embedding, const std::string& path) {
    std::ofstream out = detail::open_for_write(path);
    for (Eigen::Index row = 0; row < embedding.rows(); ++row) {
        const RowLocation loc = embedding.domain_of_row(row);
        out << loc.domain << ' ' << loc.index;
        for (Eigen::Index c = 0; c < embedding.dim(); ++c)
            out << ' ' << detail::format_value(double(embedding.coords(row, c)));
        out << '\n';
    }
}

template <typename Scalar = double>
Embedding<Scalar> load_embedding(const std::string& path) {
    std::ifstream in = detail::open_for_read(path);
    std::string line;
    Index lineno = 0;

    std::vector<std::vector<double>> rows[2];
    Index dim = -1;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tokens = detail::split_tokens(line);
        if (tokens.empty()) continue;
        if (tokens.size() < 3) throw ParseError(path, lineno, "expected 'domain index coords...'");
        const long long domain = detail::parse_integer(tokens[0], path, lineno);
        if (domain != 1 && domain != 2)
            throw ParseError(path, lineno, "domain must be 1 or 2, got '" + tokens[0] + "'");
        const long long index = detail::parse_integer(tokens[1], path, lineno);
        auto& bucket = rows[domain - 1];
        if (index != static_cast<long long>(bucket.size()))
            throw ParseError(path, lineno, "indices must be contiguous from 0 per domain");
        const Index row_dim = static_cast<Index>(tokens.size()) - 2;
        if (dim < 0)
            dim = row_dim;
        else if (dim != row_dim)
            throw ParseError(path, lineno, "inconsistent coordinate count");
        std::vector<double> coords(row_dim);
        for (Index c = 0; c < row_dim; ++c)
            coords[c] = detail::parse_value(tokens[c + 2], path, lineno);
        bucket.push_back(std::move(coords));
    }
    if (rows[0].empty()) throw ParseError(path, lineno, "no domain 1 rows");

    Embedding<Scalar> out;
    out.n1 = static_cast<Eigen::Index>(rows[0].size());
    out.n2 = static_cast<Eigen::Index>(rows[1].size());
    out.coords.resize(out.n1 + out.n2, dim);
    for (int d = 0; d < 2; ++d)
        for (std::size_t i = 0; i < rows[d].size(); ++i)
            for (Index c = 0; c < dim; ++c)
                out.coords(Eigen::Index(d == 0 ? i : rows[0].size() + i), c) =
                    Scalar(rows[d][i][c]);
    return out;
}

/// ROC curve as "k fpr tpr" lines, k = 0 being the (0, 0) endpoint.
template <typename Scalar>
void save_roc_curve(const RocCurve<Scalar>& curve, const std::string& path) {
    std::ofstream out = detail::open_for_write(path);
    for (std::size_t k = 0; k < curve.points.size(); ++k)
        out << k << ' ' << detail::format_value(double(curve.points[k].first)) << ' '
            << detail::format_value(double(curve.points[k].second)) << '\n';
}

inline std::vector<std::string> load_labels(const std::string& path) {
    std::ifstream in = detail::open_for_read(path);
    std::vector<std::string> labels;
    std::string line;
    while (std::getline(in, line)) labels.push_back(line);
    // a single trailing blank line is the usual text-file terminator
    if (!labels.empty() && labels.back().empty()) labels.pop_back();
    return labels;
}

/// Paths naming the dataset files; relative entries are resolved against the
/// manifest's own directory.
struct DatasetManifest {
    std::string domain1;
    std::optional<std::string> domain2;
    std::optional<std::string> cross_graph;
    std::optional<std::string> labels1;
    std::optional<std::string> labels2;
};

inline DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in = detail::open_for_read(path);
    nlohmann::json doc;
    try {
        in >> doc;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(path, 0, e.what());
    }
    if (!doc.is_object()) throw ParseError(path, 0, "manifest must be a JSON object");

    const auto base = std::filesystem::path(path).parent_path();
    auto resolve = [&base](const std::string& p) {
        std::filesystem::path fp(p);
        return (fp.is_absolute() ? fp : base / fp).string();
    };

    DatasetManifest manifest;
    if (!doc.contains("domain1") || !doc["domain1"].is_string())
        throw ParseError(path, 0, "manifest needs a 'domain1' path");
    manifest.domain1 = resolve(doc["domain1"].get<std::string>());
    auto read_optional = [&](const char* key) -> std::optional<std::string> {
        if (!doc.contains(key)) return std::nullopt;
        if (!doc[key].is_string()) throw ParseError(path, 0, std::string(key) + " must be a path");
        return resolve(doc[key].get<std::string>());
    };
    manifest.domain2 = read_optional("domain2");
    manifest.cross_graph = read_optional("cross_graph");
    manifest.labels1 = read_optional("labels1");
    manifest.labels2 = read_optional("labels2");
    return manifest;
}

template <typename Scalar = double>
struct LoadedDataset {
    MultimodalDataset<Scalar> dataset;
    std::vector<std::string> labels1;
    std::vector<std::string> labels2;
};

template <typename Scalar = double>
LoadedDataset<Scalar> load_dataset(const DatasetManifest& manifest) {
    LoadedDataset<Scalar> out;
    out.dataset.domain1 = load_matrix<Scalar>(manifest.domain1);
    if (manifest.domain2) {
        out.dataset.domain2 = load_matrix<Scalar>(*manifest.domain2);
        if (!manifest.cross_graph)
            throw Error("manifest has a second domain but no cross graph");
        out.dataset.cross_graph = load_cross_graph<Scalar>(
            *manifest.cross_graph, out.dataset.n1(), out.dataset.n2());
    } else {
        if (manifest.cross_graph)
            throw Error("manifest has a cross graph but no second domain");
        out.dataset.cross_graph.resize(out.dataset.n1(), 0);
    }
    if (manifest.labels1) {
        out.labels1 = load_labels(*manifest.labels1);
        if (static_cast<Eigen::Index>(out.labels1.size()) != out.dataset.n1())
            throw DimensionMismatch("labels1 count does not match domain 1");
    }
    if (manifest.labels2) {
        out.labels2 = load_labels(*manifest.labels2);
        if (static_cast<Eigen::Index>(out.labels2.size()) != out.dataset.n2())
            throw DimensionMismatch("labels2 count does not match domain 2");
    }
    return out;
}

template <typename Scalar = double>
LoadedDataset<Scalar> load_dataset(const std::string& manifest_path) {
    return load_dataset<Scalar>(load_manifest(manifest_path));
}

namespace detail {

inline std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            default: out += c;
        }
    }
    return out;
}

inline std::string format_svg_coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

} // namespace detail

/// Scatter plot of a 2-D embedding: domain-1 items as circles, domain-2
/// items as green text labels (the item index when no labels are given).
/// Coordinates are mapped with a uniform scale into a 1000 x 1000 viewport
/// with a 5% margin; identical input yields byte-identical output.
template <typename Scalar>
void emit_scatter_svg(const Embedding<Scalar>& embedding, const std::vector<std::string>& labels1,
                      const std::vector<std::string>& labels2, std::ostream& out) {
    if (embedding.dim() != 2) throw UnsupportedDimension(embedding.dim());
    if (!labels1.empty() && static_cast<Eigen::Index>(labels1.size()) != embedding.n1)
        throw DimensionMismatch("labels1 count does not match domain 1");
    if (!labels2.empty() && static_cast<Eigen::Index>(labels2.size()) != embedding.n2)
        throw DimensionMismatch("labels2 count does not match domain 2");

    const double size = 1000.0;
    const double margin = 0.05 * size;
    const double span = size - 2 * margin;

    const Vector<Scalar> mins = embedding.coords.colwise().minCoeff();
    const Vector<Scalar> maxs = embedding.coords.colwise().maxCoeff();
    const double range = std::max(double(maxs[0] - mins[0]), double(maxs[1] - mins[1]));
    const double scale = range > 0 ? span / range : 1.0;
    const double mid_x = 0.5 * double(mins[0] + maxs[0]);
    const double mid_y = 0.5 * double(mins[1] + maxs[1]);

    auto to_px = [&](Scalar x, Scalar y) {
        return std::pair<double, double>(size / 2 + (double(x) - mid_x) * scale,
                                         size / 2 - (double(y) - mid_y) * scale);
    };

    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"1000\" "
           "viewBox=\"0 0 1000 1000\">\n";
    out << "<rect width=\"1000\" height=\"1000\" fill=\"white\"/>\n";
    for (Eigen::Index i = 0; i < embedding.n1; ++i) {
        const auto [px, py] = to_px(embedding.coords(i, 0), embedding.coords(i, 1));
        out << "<circle cx=\"" << detail::format_svg_coord(px) << "\" cy=\""
            << detail::format_svg_coord(py) << "\" r=\"3\" fill=\"#33557f\"";
        if (!labels1.empty())
            out << "><title>" << detail::xml_escape(labels1[i]) << "</title></circle>\n";
        else
            out << "/>\n";
    }
    for (Eigen::Index j = 0; j < embedding.n2; ++j) {
        const Eigen::Index row = embedding.n1 + j;
        const auto [px, py] = to_px(embedding.coords(row, 0), embedding.coords(row, 1));
        const std::string text = labels2.empty() ? std::to_string(j) : labels2[j];
        out << "<text x=\"" << detail::format_svg_coord(px) << "\" y=\""
            << detail::format_svg_coord(py)
            << "\" fill=\"green\" font-size=\"12\" text-anchor=\"middle\">"
            << detail::xml_escape(text) << "</text>\n";
    }
    out << "</svg>\n";
}

template <typename Scalar>
void emit_scatter_svg(const Embedding<Scalar>& embedding, const std::vector<std::string>& labels1,
                      const std::vector<std::string>& labels2, const std::string& path) {
    std::ofstream out = detail::open_for_write(path);
    emit_scatter_svg(embedding, labels1, labels2, out);
}

} // namespace mrsne

#endif // MRSNE_IO_HPP
