#include "mrt/io.hpp"

#include <bit>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace mrt {

namespace {

static_assert(std::endian::native == std::endian::little,
              "binary STF encoding assumes a little-endian host");

std::string stf_header(const TensorField& f, bool binary) {
  nlohmann::json j;
  j["version"] = 1;
  j["n"] = f.dim();
  j["m"] = f.rank();
  j["dims"] = f.grid().dims();
  j["spacing"] = f.grid().spacing();
  j["origin"] = f.grid().origin();
  j["component_order"] = "lex-nondecreasing";
  j["scalar"] = "complex";
  j["encoding"] = binary ? "binary-le" : "text";
  return j.dump();
}

}  // namespace

void atomic_write(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw validation_error("cannot open '" + tmp + "' for writing");
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw validation_error("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw validation_error("rename failed for '" + path + "': " + ec.message());
}

void write_stf(const std::string& path, const TensorField& f, bool binary) {
  std::ostringstream out;
  out << stf_header(f, binary) << "\n";
  const std::int64_t npts = f.grid().num_points();
  const std::int64_t ncomp = f.num_components();
  if (binary) {
    std::string buf;
    buf.resize(static_cast<size_t>(npts * ncomp * 2) * sizeof(double));
    double* w = reinterpret_cast<double*>(buf.data());
    for (std::int64_t p = 0; p < npts; ++p) {
      for (std::int64_t c = 0; c < ncomp; ++c) {
        *w++ = f.at(c, p).real();
        *w++ = f.at(c, p).imag();
      }
    }
    out << buf;
  } else {
    out.precision(17);
    for (std::int64_t p = 0; p < npts; ++p) {
      for (std::int64_t c = 0; c < ncomp; ++c) {
        out << f.at(c, p).real() << " " << f.at(c, p).imag() << (c + 1 == ncomp ? "" : " ");
      }
      out << "\n";
    }
  }
  atomic_write(path, out.str());
}

TensorField read_stf(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw validation_error("cannot open '" + path + "'");
  std::string header_line;
  std::getline(in, header_line);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(header_line);
  } catch (const nlohmann::json::exception& e) {
    throw validation_error("bad STF header in '" + path + "': " + e.what());
  }
  if (j.value("version", 0) != 1) throw validation_error("unsupported STF version in '" + path + "'");
  if (j.value("component_order", "") != std::string("lex-nondecreasing")) {
    throw validation_error("unsupported component order in '" + path + "'");
  }
  const int n = j.at("n").get<int>();
  const int m = j.at("m").get<int>();
  GridDomain grid(j.at("dims").get<std::vector<int>>(), j.at("spacing").get<std::vector<double>>(),
                  j.at("origin").get<std::vector<double>>());
  if (grid.dim() != n) throw validation_error("STF header dims inconsistent with n");
  TensorField f(grid, m);
  const std::int64_t npts = grid.num_points();
  const std::int64_t ncomp = f.num_components();
  const std::string enc = j.value("encoding", "text");
  if (enc == "binary-le") {
    std::vector<double> buf(static_cast<size_t>(npts * ncomp * 2));
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
    if (in.gcount() != static_cast<std::streamsize>(buf.size() * sizeof(double))) {
      throw validation_error("truncated STF payload in '" + path + "'");
    }
    size_t r = 0;
    for (std::int64_t p = 0; p < npts; ++p) {
      for (std::int64_t c = 0; c < ncomp; ++c) {
        f.at(c, p) = cplx(buf[r], buf[r + 1]);
        r += 2;
      }
    }
  } else if (enc == "text") {
    for (std::int64_t p = 0; p < npts; ++p) {
      for (std::int64_t c = 0; c < ncomp; ++c) {
        double re, im;
        if (!(in >> re >> im)) throw validation_error("truncated STF payload in '" + path + "'");
        f.at(c, p) = cplx(re, im);
      }
    }
  } else {
    throw validation_error("unknown STF encoding '" + enc + "'");
  }
  return f;
}

void write_ray_table(const std::string& path, const std::vector<Ray>& rays,
                     const std::vector<cplx>& values) {
  if (rays.size() != values.size()) throw validation_error("ray table: size mismatch");
  std::ostringstream out;
  out.precision(17);
  if (!rays.empty()) {
    const int n = static_cast<int>(rays[0].base.size());
    for (int a = 1; a <= n; ++a) out << "x_" << a << ",";
    for (int a = 1; a <= n; ++a) out << "xi_" << a << ",";
    out << "k,value_re,value_im\n";
  }
  for (size_t i = 0; i < rays.size(); ++i) {
    for (double v : rays[i].base) out << v << ",";
    for (double v : rays[i].dir) out << v << ",";
    out << rays[i].k << "," << values[i].real() << "," << values[i].imag() << "\n";
  }
  atomic_write(path, out.str());
}

std::pair<std::vector<Ray>, std::vector<cplx>> read_ray_table(const std::string& path, int n) {
  std::ifstream in(path);
  if (!in) throw validation_error("cannot open '" + path + "'");
  std::string line;
  std::vector<Ray> rays;
  std::vector<cplx> values;
  bool first = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (first && line.find("x_1") != std::string::npos) {
      first = false;
      continue;
    }
    first = false;
    std::vector<double> nums;
    std::stringstream ss(line);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      if (!tok.empty()) nums.push_back(std::stod(tok));
    }
    if (static_cast<int>(nums.size()) != 2 * n + 3) {
      throw validation_error("ray table row has wrong column count in '" + path + "'");
    }
    Ray r;
    r.base.assign(nums.begin(), nums.begin() + n);
    r.dir.assign(nums.begin() + n, nums.begin() + 2 * n);
    r.k = static_cast<int>(nums[static_cast<size_t>(2 * n)]);
    rays.push_back(std::move(r));
    values.emplace_back(nums[static_cast<size_t>(2 * n + 1)], nums[static_cast<size_t>(2 * n + 2)]);
  }
  return {std::move(rays), std::move(values)};
}

void write_report(const std::string& path, const std::vector<std::pair<std::string, double>>& metrics) {
  std::ostringstream out;
  out.precision(17);
  for (const auto& [k, v] : metrics) out << k << " " << v << "\n";
  atomic_write(path, out.str());
}

}  // namespace mrt
