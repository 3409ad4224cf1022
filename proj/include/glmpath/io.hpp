#pragma once

#include "glmpath/types.hpp"

#include <string>

namespace glmpath {

enum class FileFormat { binary, csv };

// .csv / .CSV selects text, everything else the binary container
FileFormat format_from_path(const std::string& path);

// GLMX container: "GLMX" magic, u32 version, u64 rows, u64 cols,
// then row-major f64 payload. All fields little-endian.
Matrix load_matrix_binary(const std::string& path);
void save_matrix_binary(const std::string& path, const Matrix& x);

// headerless numeric CSV, one row per line, %.17g round-trip precision
Matrix load_matrix_csv(const std::string& path);
void save_matrix_csv(const std::string& path, const Matrix& x);

Matrix load_matrix(const std::string& path);
void save_matrix(const std::string& path, const Matrix& x);

// targets are stored as single-column matrices in either format
Vector load_targets(const std::string& path);
void save_targets(const std::string& path, const Vector& y);

// GLMM container: "GLMM" magic, u32 version, u32 family, u64 d, u64 k,
// f64 lambda, f64 alpha, row-major beta (d*k), beta0 (k).
GlmModel load_model(const std::string& path);
void save_model(const std::string& path, const GlmModel& model);

}  // namespace glmpath
