#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "chaindiff/numeric.hpp"

namespace chaindiff {
namespace cli {

struct DiffCmd {
  std::string expr_text;
  int order = -1;  // -1 infers from direction_indices
  std::vector<int> direction_indices;
  std::string at = "x";
  bool trace = false;
  bool json = false;
};

struct VerifyCmd {
  std::string expr_text;
  std::string bindings_file;  // optional
  std::string point;
  int order = -1;  // -1 infers from directions
  std::vector<std::string> directions;  // one vector literal per direction
  double tol = 1e-5;
  bool grid_point = false;  // point lives in a grid-function space
  std::map<std::string, std::string> inline_bindings;  // name -> coefficients
};

struct PartitionsCmd {
  int n = 0;
};

struct CanonCmd {
  std::string expr_text;
  bool json = false;
};

using Command = std::variant<DiffCmd, VerifyCmd, PartitionsCmd, CanonCmd>;

// 0 ok, 1 verification failure, 2 usage or parse error
int run(const Command& cmd, std::ostream& out, std::ostream& err);

// Full argv front end (argv[0] excluded).
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

std::map<std::string, ConcreteFunc> parse_bindings_text(const std::string& text);
Value parse_value(const std::string& text);

}  // namespace cli
}  // namespace chaindiff
