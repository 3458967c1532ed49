#include "nestgil/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace nestgil {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

int next_pgm_token(std::istream& in) {
    // skips whitespace and '#' comments
    while (in) {
        int c = in.peek();
        if (c == '#') {
            std::string line;
            std::getline(in, line);
        } else if (std::isspace(c)) {
            in.get();
        } else {
            break;
        }
    }
    int value;
    if (!(in >> value)) throw data_error("pgm: malformed header token");
    return value;
}

}  // namespace

Image read_pgm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("pgm: cannot open " + path);
    std::string magic;
    in >> magic;
    if (magic != "P2" && magic != "P5") throw data_error("pgm: unsupported magic " + magic);
    int width = next_pgm_token(in);
    int height = next_pgm_token(in);
    int maxval = next_pgm_token(in);
    if (width <= 0 || height <= 0 || maxval <= 0) throw data_error("pgm: invalid header");
    Image img(height, width, static_cast<double>(maxval));
    if (magic == "P2") {
        for (double& v : img.values) {
            int value;
            if (!(in >> value)) throw data_error("pgm: truncated P2 data");
            v = value;
        }
    } else {
        if (maxval > 255) throw data_error("pgm: P5 maxval > 255 unsupported");
        in.get();  // single whitespace after maxval
        std::vector<unsigned char> raw(img.values.size());
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
        if (in.gcount() != static_cast<std::streamsize>(raw.size()))
            throw data_error("pgm: truncated P5 data");
        for (size_t i = 0; i < raw.size(); ++i) img.values[i] = raw[i];
    }
    return img;
}

void write_pgm(const std::string& path, const Image& img, bool binary) {
    img.validate();
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("pgm: cannot write " + path);
    out << (binary ? "P5" : "P2") << "\n" << img.width << " " << img.height << "\n255\n";
    auto quantize = [&](double v) {
        double scaled = v / img.data_range * 255.0;
        int q = static_cast<int>(std::lround(scaled));
        return std::clamp(q, 0, 255);
    };
    if (binary) {
        std::vector<unsigned char> raw(img.values.size());
        for (size_t i = 0; i < raw.size(); ++i)
            raw[i] = static_cast<unsigned char>(quantize(img.values[i]));
        out.write(reinterpret_cast<const char*>(raw.data()),
                  static_cast<std::streamsize>(raw.size()));
    } else {
        for (int i = 0; i < img.height; ++i) {
            for (int j = 0; j < img.width; ++j)
                out << quantize(img.at(i, j)) << (j + 1 < img.width ? ' ' : '\n');
        }
    }
}

namespace {

std::ofstream open_csv(const std::string& path, const std::vector<std::string>& comments) {
    std::ofstream out(path, std::ios::binary);  // binary: LF endings everywhere
    if (!out) throw data_error("csv: cannot write " + path);
    for (const auto& c : comments) out << "# " << c << "\n";
    return out;
}

}  // namespace

void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& mat,
                      const std::vector<std::string>& comments) {
    auto out = open_csv(path, comments);
    for (Eigen::Index i = 0; i < mat.rows(); ++i) {
        for (Eigen::Index j = 0; j < mat.cols(); ++j)
            out << format_double(mat(i, j)) << (j + 1 < mat.cols() ? "," : "\n");
        if (mat.cols() == 0) out << "\n";
    }
}

void write_csv_rows(const std::string& path, const std::vector<std::string>& header_comments,
                    const std::vector<std::vector<double>>& rows) {
    auto out = open_csv(path, header_comments);
    for (const auto& row : rows) {
        for (size_t j = 0; j < row.size(); ++j)
            out << format_double(row[j]) << (j + 1 < row.size() ? "," : "\n");
        if (row.empty()) out << "\n";
    }
}

void write_csv_triplets(const std::string& path, const Eigen::SparseMatrix<double>& mat,
                        const std::vector<std::string>& comments) {
    auto out = open_csv(path, comments);
    out << "row,col,value\n";
    for (int k = 0; k < mat.outerSize(); ++k)
        for (Eigen::SparseMatrix<double>::InnerIterator it(mat, k); it; ++it)
            out << it.row() << "," << it.col() << "," << format_double(it.value()) << "\n";
}

void write_measurements(const std::string& path, const MeasurementFile& mf,
                        const std::string& manifest) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("csv: cannot write " + path);
    out << "# " << manifest << "\n";
    out << "# height=" << mf.height << " width=" << mf.width << " patch=" << mf.patch
        << " stride=" << mf.stride << " ratio=" << format_double(mf.ratio) << " seed=" << mf.seed
        << " m=" << mf.m_rows << " n=" << mf.n_cols
        << " data_range=" << format_double(mf.data_range) << "\n";
    for (const auto& block : mf.blocks) {
        for (Eigen::Index j = 0; j < block.size(); ++j)
            out << format_double(block[j]) << (j + 1 < block.size() ? "," : "\n");
    }
}

MeasurementFile read_measurements(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("csv: cannot open " + path);
    MeasurementFile mf;
    bool have_meta = false;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (line.find("height=") != std::string::npos) {
                std::istringstream ls(line.substr(1));
                std::string tok;
                while (ls >> tok) {
                    auto eq = tok.find('=');
                    if (eq == std::string::npos) continue;
                    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
                    if (key == "height") mf.height = std::stoi(val);
                    else if (key == "width") mf.width = std::stoi(val);
                    else if (key == "patch") mf.patch = std::stoi(val);
                    else if (key == "stride") mf.stride = std::stoi(val);
                    else if (key == "ratio") mf.ratio = std::stod(val);
                    else if (key == "seed") mf.seed = std::stoull(val);
                    else if (key == "m") mf.m_rows = std::stoi(val);
                    else if (key == "n") mf.n_cols = std::stoi(val);
                    else if (key == "data_range") mf.data_range = std::stod(val);
                }
                have_meta = true;
            }
            continue;
        }
        std::vector<double> row;
        std::istringstream ls(line);
        std::string cell;
        while (std::getline(ls, cell, ',')) row.push_back(std::stod(cell));
        mf.blocks.emplace_back(Eigen::Map<Eigen::VectorXd>(row.data(), row.size()));
    }
    if (!have_meta) throw data_error("measurements: metadata header missing in " + path);
    for (const auto& b : mf.blocks)
        if (b.size() != mf.m_rows) throw data_error("measurements: block length mismatch");
    return mf;
}

}  // namespace nestgil
