#include "glmpath/io.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace glmpath {

namespace {

constexpr std::uint32_t kMatrixMagic = 0x584d4c47u;  // "GLMX"
constexpr std::uint32_t kModelMagic = 0x4d4d4c47u;   // "GLMM"
constexpr std::uint32_t kFormatVersion = 1;

// explicit little-endian packing so the containers are portable
void put_u32(std::string& buf, std::uint32_t v) {
  for (int s = 0; s < 4; ++s) buf.push_back(static_cast<char>((v >> (8 * s)) & 0xffu));
}

void put_u64(std::string& buf, std::uint64_t v) {
  for (int s = 0; s < 8; ++s) buf.push_back(static_cast<char>((v >> (8 * s)) & 0xffu));
}

void put_f64(std::string& buf, double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, 8);
  put_u64(buf, bits);
}

struct Reader {
  std::string data;
  std::size_t pos = 0;
  const std::string& path;

  explicit Reader(const std::string& p) : path(p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw io_error("cannot open " + p);
    std::ostringstream ss;
    ss << in.rdbuf();
    data = ss.str();
  }

  void need(std::size_t n, const char* what) {
    if (pos + n > data.size()) {
      throw io_error(path + ": truncated file while reading " + what);
    }
  }

  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int s = 0; s < 4; ++s) {
      v |= static_cast<std::uint32_t>(static_cast<unsigned char>(data[pos + s])) << (8 * s);
    }
    pos += 4;
    return v;
  }

  std::uint64_t u64(const char* what) {
    need(8, what);
    std::uint64_t v = 0;
    for (int s = 0; s < 8; ++s) {
      v |= static_cast<std::uint64_t>(static_cast<unsigned char>(data[pos + s])) << (8 * s);
    }
    pos += 8;
    return v;
  }

  double f64(const char* what) {
    const std::uint64_t bits = u64(what);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
  }

  void f64_block(double* out, std::size_t count, const char* what) {
    for (std::size_t t = 0; t < count; ++t) out[t] = f64(what);
  }

  void expect_end() {
    if (pos != data.size()) {
      throw io_error(path + ": trailing bytes after payload");
    }
  }
};

void check_magic(Reader& r, std::uint32_t magic, const char* name) {
  if (r.u32("magic") != magic) {
    throw io_error(r.path + ": not a " + std::string(name) + " file (bad magic)");
  }
  const std::uint32_t version = r.u32("version");
  if (version != kFormatVersion) {
    throw io_error(r.path + ": unsupported " + std::string(name) + " version " +
                   std::to_string(version));
  }
}

void write_file(const std::string& path, const std::string& buf) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw io_error("cannot open " + path + " for writing");
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw io_error("failed writing " + path);
}

Index checked_dim(std::uint64_t v, const std::string& path, const char* what) {
  if (v > static_cast<std::uint64_t>(1) << 31) {
    throw io_error(path + ": implausible " + what + " " + std::to_string(v));
  }
  return static_cast<Index>(v);
}

void append_cell(std::string& buf, double v) {
  char tmp[40];
  std::snprintf(tmp, sizeof(tmp), "%.17g", v);
  buf += tmp;
}

}  // namespace

FileFormat format_from_path(const std::string& path) {
  const auto dot = path.find_last_of('.');
  if (dot == std::string::npos) return FileFormat::binary;
  std::string ext = path.substr(dot + 1);
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext == "csv" ? FileFormat::csv : FileFormat::binary;
}

Matrix load_matrix_binary(const std::string& path) {
  Reader r(path);
  check_magic(r, kMatrixMagic, "GLMX");
  const Index n = checked_dim(r.u64("row count"), path, "row count");
  const Index d = checked_dim(r.u64("column count"), path, "column count");
  Matrix x(n, d);
  r.f64_block(x.data(), static_cast<std::size_t>(x.size()), "matrix payload");
  r.expect_end();
  return x;
}

void save_matrix_binary(const std::string& path, const Matrix& x) {
  std::string buf;
  buf.reserve(24 + static_cast<std::size_t>(x.size()) * 8);
  put_u32(buf, kMatrixMagic);
  put_u32(buf, kFormatVersion);
  put_u64(buf, static_cast<std::uint64_t>(x.rows()));
  put_u64(buf, static_cast<std::uint64_t>(x.cols()));
  for (Index t = 0; t < x.size(); ++t) put_f64(buf, x.data()[t]);
  write_file(path, buf);
}

Matrix load_matrix_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open " + path);
  std::vector<double> cells;
  Index cols = -1;
  Index row = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    Index col = 0;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      const std::size_t end = comma == std::string::npos ? line.size() : comma;
      // from_chars wants trimmed input
      std::size_t a = start;
      std::size_t b = end;
      while (a < b && (line[a] == ' ' || line[a] == '\t')) ++a;
      while (b > a && (line[b - 1] == ' ' || line[b - 1] == '\t')) --b;
      double v = 0.0;
      const auto res = std::from_chars(line.data() + a, line.data() + b, v);
      if (res.ec != std::errc() || res.ptr != line.data() + b || a == b) {
        throw validation_error(path + ": non-numeric value \"" + line.substr(start, end - start) +
                               "\" at row " + std::to_string(row) + ", column " +
                               std::to_string(col));
      }
      cells.push_back(v);
      ++col;
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (cols < 0) {
      cols = col;
    } else if (col != cols) {
      throw validation_error(path + ": row " + std::to_string(row) + " has " +
                             std::to_string(col) + " columns, expected " + std::to_string(cols));
    }
    ++row;
  }
  if (row == 0) throw io_error(path + ": empty file");
  Matrix x(row, cols);
  std::copy(cells.begin(), cells.end(), x.data());
  return x;
}

void save_matrix_csv(const std::string& path, const Matrix& x) {
  std::string buf;
  for (Index i = 0; i < x.rows(); ++i) {
    for (Index j = 0; j < x.cols(); ++j) {
      if (j > 0) buf.push_back(',');
      append_cell(buf, x(i, j));
    }
    buf.push_back('\n');
  }
  write_file(path, buf);
}

Matrix load_matrix(const std::string& path) {
  return format_from_path(path) == FileFormat::csv ? load_matrix_csv(path)
                                                   : load_matrix_binary(path);
}

void save_matrix(const std::string& path, const Matrix& x) {
  if (format_from_path(path) == FileFormat::csv) {
    save_matrix_csv(path, x);
  } else {
    save_matrix_binary(path, x);
  }
}

Vector load_targets(const std::string& path) {
  Matrix x = load_matrix(path);
  if (x.cols() != 1) {
    throw validation_error(path + ": targets must be a single column, got " +
                           std::to_string(x.cols()));
  }
  Vector y(x.rows());
  for (Index i = 0; i < x.rows(); ++i) y[i] = x(i, 0);
  return y;
}

void save_targets(const std::string& path, const Vector& y) {
  Matrix x(y.size(), 1);
  for (Index i = 0; i < y.size(); ++i) x(i, 0) = y[i];
  save_matrix(path, x);
}

GlmModel load_model(const std::string& path) {
  Reader r(path);
  check_magic(r, kModelMagic, "GLMM");
  const std::uint32_t fam = r.u32("family");
  if (fam > 2) throw io_error(path + ": unknown family code " + std::to_string(fam));
  GlmModel model;
  model.family = static_cast<Family>(fam);
  const Index d = checked_dim(r.u64("dimension"), path, "dimension");
  const Index k = checked_dim(r.u64("output count"), path, "output count");
  if (k < 1 || (model.family != Family::multinomial && k != 1)) {
    throw io_error(path + ": output count " + std::to_string(k) + " invalid for family " +
                   std::string(family_name(model.family)));
  }
  model.lambda = r.f64("lambda");
  model.alpha = r.f64("alpha");
  model.beta.resize(d, k);
  r.f64_block(model.beta.data(), static_cast<std::size_t>(model.beta.size()), "coefficients");
  model.beta0.resize(k);
  r.f64_block(model.beta0.data(), static_cast<std::size_t>(k), "intercepts");
  r.expect_end();
  return model;
}

void save_model(const std::string& path, const GlmModel& model) {
  std::string buf;
  put_u32(buf, kModelMagic);
  put_u32(buf, kFormatVersion);
  put_u32(buf, static_cast<std::uint32_t>(model.family));
  put_u64(buf, static_cast<std::uint64_t>(model.dim()));
  put_u64(buf, static_cast<std::uint64_t>(model.outputs()));
  put_f64(buf, model.lambda);
  put_f64(buf, model.alpha);
  for (Index t = 0; t < model.beta.size(); ++t) put_f64(buf, model.beta.data()[t]);
  for (Index c = 0; c < model.beta0.size(); ++c) put_f64(buf, model.beta0[c]);
  write_file(path, buf);
}

}  // namespace glmpath
