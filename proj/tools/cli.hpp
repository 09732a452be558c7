#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "dilation_lab/dilation.hpp"
#include "dilation_lab/pictures.hpp"
#include "dilation_lab/pt_model.hpp"

namespace dlab::cli {

enum class Format { table, csv, json };

struct Sweep {
  std::string variable;  // alpha, a, b, c, d or state-angle
  double start = 0.0;
  double stop = 0.0;
  std::size_t steps = 2;
};

struct RunConfig {
  PTParams params;
  Perturbation pert;
  LocalState state;
  GenuineAngles angles;
  std::optional<double> p_plus;
  std::optional<double> pp_plus;
  std::optional<Sweep> sweep;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> output;
  Format format = Format::table;
  std::vector<double> times = {0.1, 0.5, 1.0, 2.0, 5.0};
  CMatrix psi0 = CMatrix::column({1.0, 0.0});
  std::size_t samples = 100000;
  std::size_t workers = 1;

  StateBasis basis() const { return StateBasis::computational(); }
  StateBasis basis_p() const { return StateBasis::rotated(angles.delta, angles.Delta_prime); }
};

/// Parses a flat JSON document. Unknown keys and malformed values throw ValidationError.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

std::optional<Format> format_from_string(const std::string& name);

/// Exit codes.
inline constexpr int kOk = 0;
inline constexpr int kValidation = 2;
inline constexpr int kInternal = 3;

/// Entry point shared by the executable and the tests; args excludes argv[0].
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace dlab::cli
