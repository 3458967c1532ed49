#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "nestgil/image.hpp"

namespace nestgil {

// PGM, P2 (ascii) and P5 (binary, maxval <= 255). Values are kept as read;
// data_range is the file's maxval.
Image read_pgm(const std::string& path);

// Scales [0, data_range] to 0..255 with rounding and clamping.
void write_pgm(const std::string& path, const Image& img, bool binary = true);

// CSV dialect: comma separated, '.' decimal, '#' comment lines, LF endings,
// %.17g formatting so equal inputs give byte-identical files.
void write_csv_matrix(const std::string& path, const Eigen::MatrixXd& mat,
                      const std::vector<std::string>& comments = {});
void write_csv_rows(const std::string& path, const std::vector<std::string>& header_comments,
                    const std::vector<std::vector<double>>& rows);
void write_csv_triplets(const std::string& path, const Eigen::SparseMatrix<double>& mat,
                        const std::vector<std::string>& comments = {});

// Per-patch measurement container used by the sample/reconstruct commands.
struct MeasurementFile {
    int height = 0, width = 0;
    int patch = 33, stride = 8;
    double ratio = 0.25;
    uint64_t seed = 0;
    int m_rows = 0, n_cols = 0;
    double data_range = 255.0;
    std::vector<Eigen::VectorXd> blocks;
};

void write_measurements(const std::string& path, const MeasurementFile& mf,
                        const std::string& manifest);
MeasurementFile read_measurements(const std::string& path);

std::string format_double(double v);

}  // namespace nestgil
