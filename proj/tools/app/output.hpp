#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bcvhelix/bour.hpp"
#include "bcvhelix/oracle.hpp"
#include "config.hpp"

namespace bcvapp {

/// Scientific notation, 17 significant digits; "nan", "inf", "-inf" for non-finite values.
std::string format_real(double x);

/// Header u,t,x,y,z,H_ext,K,cmc_residual. `residual` holds one value per kept row.
std::string mesh_csv(const bcv::MeshGrid& mesh, const std::vector<double>& residual);

/// v lines, then two triangles per grid quad. Quads are only formed between
/// rows that were adjacent in the sampling grid.
std::string mesh_obj(const bcv::MeshGrid& mesh, bcv::Interval u_range);

/// Header u,xi1,xi2,theta0,U.
std::string profile_csv(const std::vector<bcv::ChartRow>& rows);

/// Pretty-printed with a trailing newline.
std::string json_text(const Json& j);

/// Files written by one command. Each file goes through a temporary name and
/// a rename; rollback() removes everything written so far.
class OutputSet {
 public:
  explicit OutputSet(std::filesystem::path dir);

  /// Returns the file name relative to the output directory.
  std::string write(const std::string& name, const std::string& content);
  void rollback();
  const std::vector<std::string>& written() const { return names_; }

 private:
  std::filesystem::path dir_;
  std::vector<std::string> names_;
};

}  // namespace bcvapp
