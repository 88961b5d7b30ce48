#pragma once

#include <stdexcept>
#include <string>

namespace enetlts {

/// Base class for all errors raised by the library.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid user-supplied input: bad dataset, bad configuration, bad file.
struct ValidationError : Error {
  using Error::Error;
};

/// A column has no spread where positive spread is required.
struct ZeroSpreadColumn : Error {
  explicit ZeroSpreadColumn(int col, const std::string& context = "")
      : Error("column " + std::to_string(col) + " has zero spread" +
              (context.empty() ? "" : " (" + context + ")")),
        column(col) {}
  int column;
};

/// Solver ran out of iterations with the coefficients still moving.
struct NoConvergence : Error {
  using Error::Error;
};

/// All IRLS weights vanished; the problem is effectively separated.
struct DegenerateWeights : Error {
  using Error::Error;
};

/// An elemental subset could not produce a usable fit after retries.
struct DegenerateDraw : Error {
  using Error::Error;
};

/// Requested h-subset class sizes exceed the available class counts.
struct InfeasibleSplit : Error {
  using Error::Error;
};

/// A cross-validation training fold lost a class.
struct FoldDegenerate : Error {
  using Error::Error;
};

/// Every observation was flagged as an outlier.
struct AllZeroWeights : Error {
  using Error::Error;
};

/// A simulated sample came out with an empty class.
struct DegenerateSample : Error {
  using Error::Error;
};

}  // namespace enetlts
