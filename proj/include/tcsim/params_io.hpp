#pragma once

// Flat "name = value unit" parameter files.
//
//   # comment
//   EJ1 = 124.2 GHz
//   C23 = 9 fF
//
// Every key must be known and present exactly once.

#include <filesystem>
#include <iosfwd>
#include <stdexcept>
#include <string>

#include "tcsim/circuit_model.hpp"

namespace tcsim {

class ParamsFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

CircuitParams parse_params(std::istream& in, const std::string& source_name = "<stream>");
CircuitParams load_params(const std::filesystem::path& path);

void write_params(std::ostream& out, const CircuitParams& params, const std::string& header_comment = {});
void save_params(const std::filesystem::path& path, const CircuitParams& params,
                 const std::string& header_comment = {});

}  // namespace tcsim
