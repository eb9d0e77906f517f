#include "output.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "bcvhelix/errors.hpp"

namespace bcvapp {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::scientific, 16);
  return std::string(buf, r.ptr);
}

std::string mesh_csv(const bcv::MeshGrid& mesh, const std::vector<double>& residual) {
  std::string out = "u,t,x,y,z,H_ext,K,cmc_residual\n";
  const std::size_t nt = mesh.t.size();
  for (std::size_t i = 0; i < mesh.u.size(); ++i) {
    for (std::size_t j = 0; j < nt; ++j) {
      const std::size_t k = i * nt + j;
      const auto& v = mesh.vertices[k];
      for (double x : {mesh.u[i], mesh.t[j], v.x(), v.y(), v.z(), mesh.H_ext[k], mesh.K[k]}) {
        out += format_real(x);
        out += ',';
      }
      out += format_real(residual.at(i));
      out += '\n';
    }
  }
  return out;
}

std::string mesh_obj(const bcv::MeshGrid& mesh, bcv::Interval u_range) {
  std::string out;
  for (const auto& v : mesh.vertices) {
    out += "v " + format_real(v.x()) + ' ' + format_real(v.y()) + ' ' + format_real(v.z()) + '\n';
  }
  const std::size_t nt = mesh.t.size();
  auto grid_row = [&](double u) {
    return std::lround((u - u_range.lo) / u_range.width() * (mesh.nu - 1));
  };
  for (std::size_t i = 0; i + 1 < mesh.u.size(); ++i) {
    if (grid_row(mesh.u[i + 1]) != grid_row(mesh.u[i]) + 1) continue;
    for (std::size_t j = 0; j + 1 < nt; ++j) {
      // OBJ indices start at 1
      const std::size_t a = i * nt + j + 1, b = a + 1, c = a + nt + 1, d = a + nt;
      out += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' + std::to_string(c) + '\n';
      out += "f " + std::to_string(a) + ' ' + std::to_string(c) + ' ' + std::to_string(d) + '\n';
    }
  }
  return out;
}

std::string profile_csv(const std::vector<bcv::ChartRow>& rows) {
  std::string out = "u,xi1,xi2,theta0,U\n";
  for (const auto& r : rows) {
    out += format_real(r.u) + ',' + format_real(r.xi1) + ',' + format_real(r.xi2) + ',' + format_real(r.theta0) + ',' +
           format_real(r.U) + '\n';
  }
  return out;
}

std::string json_text(const Json& j) { return j.dump(2) + "\n"; }

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir)) {
  std::error_code ec;
  std::filesystem::create_directories(dir_, ec);
  if (ec) throw bcv::Error(bcv::ErrorCode::IoError, "cannot create " + dir_.string() + ": " + ec.message());
}

std::string OutputSet::write(const std::string& name, const std::string& content) {
  const auto target = dir_ / name;
  auto tmp = target;
  tmp += ".partial";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (f) f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw bcv::Error(bcv::ErrorCode::IoError, "cannot write " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, target, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw bcv::Error(bcv::ErrorCode::IoError, "cannot rename to " + target.string());
  }
  names_.push_back(name);
  return name;
}

void OutputSet::rollback() {
  for (const auto& n : names_) {
    std::error_code ec;
    std::filesystem::remove(dir_ / n, ec);
  }
  names_.clear();
}

}  // namespace bcvapp
