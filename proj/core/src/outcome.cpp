#include "otplab/outcome.hpp"

namespace otplab {

std::string to_string(Guess g) {
  switch (g) {
    case Guess::Zero:
      return "0";
    case Guess::One:
      return "1";
    case Guess::Undetermined:
      return "undetermined";
  }
  return "?";
}

}  // namespace otplab
