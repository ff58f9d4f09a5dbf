// Exceptions shared by the optimization modules.
#ifndef DFRC_ERRORS_HPP
#define DFRC_ERRORS_HPP

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace dfrc {

struct InfeasibleQos : std::runtime_error {
  std::vector<int> users;  // users whose QoS constraint is violated
  InfeasibleQos(std::string msg, std::vector<int> u)
      : std::runtime_error(std::move(msg)), users(std::move(u)) {}
};

struct SolverFailure : std::runtime_error {
  std::string dump;  // problem dump for cross-solver debugging
  SolverFailure(std::string msg, std::string d)
      : std::runtime_error(std::move(msg)), dump(std::move(d)) {}
};

}  // namespace dfrc

#endif  // DFRC_ERRORS_HPP
