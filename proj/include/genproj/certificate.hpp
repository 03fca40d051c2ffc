#pragma once

#include <map>
#include <optional>
#include <string>

#include "genproj/matrix.hpp"

namespace genproj {

enum class Verdict { Holds, Fails, Inconclusive };
enum class Method { ExactSymbolic, SchwartzZippel, FloatSampling };

inline const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Holds: return "Holds";
    case Verdict::Fails: return "Fails";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

inline const char* to_string(Method m) {
  switch (m) {
    case Method::ExactSymbolic: return "ExactSymbolic";
    case Method::SchwartzZippel: return "SchwartzZippel";
    case Method::FloatSampling: return "FloatSampling";
  }
  return "?";
}

/// Outcome of an exact or randomized check.
struct Certificate {
  Verdict verdict = Verdict::Inconclusive;
  Method method = Method::FloatSampling;
  int trials = 0;
  int successes = 0;
  double tolerance = 0.0;
  std::optional<CVec> witness;
  std::string detail;
  std::map<std::string, double> stats;
};

/// ceil(0.95 * trials)
inline int required_successes(int trials) { return (95 * trials + 99) / 100; }

/// Sampling verdict: Holds at >= 95% successes, Fails at zero, else Inconclusive.
inline Verdict sampling_verdict(int successes, int trials) {
  if (trials > 0 && successes >= required_successes(trials)) return Verdict::Holds;
  if (successes == 0) return Verdict::Fails;
  return Verdict::Inconclusive;
}

}  // namespace genproj
