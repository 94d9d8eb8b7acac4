#include "qtomo/serialize.hpp"

#include <fstream>
#include <sstream>

namespace qtomo {

Json matrix_to_json(const Matrix& m) {
    std::vector<double> re, im;
    re.reserve(static_cast<std::size_t>(m.size()));
    im.reserve(static_cast<std::size_t>(m.size()));
    for (Eigen::Index r = 0; r < m.rows(); ++r)
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            re.push_back(m(r, c).real());
            im.push_back(m(r, c).imag());
        }
    return Json{{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

Matrix matrix_from_json(const Json& j) {
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    const auto re = j.at("re").get<std::vector<double>>();
    const auto im = j.at("im").get<std::vector<double>>();
    if (rows < 0 || cols < 0 ||
        re.size() != static_cast<std::size_t>(rows) * cols ||
        im.size() != re.size())
        throw std::invalid_argument("matrix_from_json: inconsistent payload");
    Matrix m(rows, cols);
    for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) {
            const std::size_t k = static_cast<std::size_t>(r) * cols + c;
            m(r, c) = Complex(re[k], im[k]);
        }
    return m;
}

Json matrix_list_to_json(const std::vector<Matrix>& ops) {
    Json arr = Json::array();
    for (const auto& op : ops) arr.push_back(matrix_to_json(op));
    return arr;
}

std::vector<Matrix> matrix_list_from_json(const Json& j) {
    if (!j.is_array())
        throw std::invalid_argument("matrix_list_from_json: expected array");
    std::vector<Matrix> ops;
    ops.reserve(j.size());
    for (const auto& item : j) ops.push_back(matrix_from_json(item));
    return ops;
}

void write_json_file(const std::filesystem::path& path, const Json& j) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_json_file: cannot open " +
                                 path.string());
    out << j.dump(2) << '\n';
}

Json read_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_json_file: cannot open " +
                                 path.string());
    Json j;
    in >> j;
    return j;
}

void write_counts_csv(const std::filesystem::path& path,
                      const std::vector<std::int64_t>& counts) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_counts_csv: cannot open " +
                                 path.string());
    out << "outcome_index,count\n";
    for (std::size_t i = 0; i < counts.size(); ++i)
        out << i << ',' << counts[i] << '\n';
}

std::vector<std::int64_t> read_counts_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_counts_csv: cannot open " +
                                 path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("outcome_index,count", 0) != 0)
        throw std::runtime_error("read_counts_csv: bad header");
    std::vector<std::int64_t> counts;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string idx, cnt;
        if (!std::getline(ss, idx, ',') || !std::getline(ss, cnt))
            throw std::runtime_error("read_counts_csv: bad row");
        const auto i = static_cast<std::size_t>(std::stoll(idx));
        if (i != counts.size())
            throw std::runtime_error("read_counts_csv: rows out of order");
        counts.push_back(std::stoll(cnt));
    }
    return counts;
}

void write_coefficients_csv(const std::filesystem::path& path,
                            const Vector& coeffs) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("write_coefficients_csv: cannot open " +
                                 path.string());
    out << "outcome_index,re,im\n";
    out.precision(17);
    for (Eigen::Index i = 0; i < coeffs.size(); ++i)
        out << i << ',' << coeffs(i).real() << ',' << coeffs(i).imag() << '\n';
}

Vector read_coefficients_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("read_coefficients_csv: cannot open " +
                                 path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("outcome_index,re,im", 0) != 0)
        throw std::runtime_error("read_coefficients_csv: bad header");
    std::vector<Complex> vals;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::istringstream ss(line);
        std::string idx, re, im;
        if (!std::getline(ss, idx, ',') || !std::getline(ss, re, ',') ||
            !std::getline(ss, im))
            throw std::runtime_error("read_coefficients_csv: bad row");
        vals.emplace_back(std::stod(re), std::stod(im));
    }
    Vector v(static_cast<Eigen::Index>(vals.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i)
        v(i) = vals[static_cast<std::size_t>(i)];
    return v;
}

}  // namespace qtomo
