#include "growthlab/verdict.hpp"

namespace growthlab {

std::string_view state_name(State s) {
  switch (s) {
    case State::Holds:
      return "Holds";
    case State::Fails:
      return "Fails";
    case State::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

int exit_code(State s) {
  switch (s) {
    case State::Holds:
      return 0;
    case State::Fails:
      return 1;
    case State::Inconclusive:
      return 2;
  }
  return 2;
}

}  // namespace growthlab
