// Copyright 2026 The pdolab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace pdolab {

/// Invalid or out-of-range content in an experiment spec file. Carries a
/// human-readable location: either "line L, column C" for syntax errors or a
/// field path such as "source.visibility" for semantic ones.
class SpecError : public std::runtime_error {
  public:
    explicit SpecError(const std::string &what) : std::runtime_error(what) {}
};

/// A reconstruction was attempted without counts for every quorum setting.
class IncompleteQuorumError : public std::runtime_error {
  public:
    explicit IncompleteQuorumError(std::vector<std::string> missing)
        : std::runtime_error(format_message(missing)), missing_(std::move(missing)) {}

    const std::vector<std::string> &missing_settings() const { return missing_; }

  private:
    static std::string format_message(const std::vector<std::string> &missing) {
        std::string msg = "incomplete quorum; missing settings:";
        for (const auto &m : missing) {
            msg += ' ';
            msg += m;
        }
        return msg;
    }

    std::vector<std::string> missing_;
};

/// A matrix handed to a density-operator-only routine has a genuinely
/// negative eigenvalue.
class NotADensityOperatorError : public std::runtime_error {
  public:
    explicit NotADensityOperatorError(const std::string &what) : std::runtime_error(what) {}
};

/// An internal numerical routine left its contract (non-convergence,
/// probabilities not summing to one, and the like).
class NumericalError : public std::runtime_error {
  public:
    explicit NumericalError(const std::string &what) : std::runtime_error(what) {}
};

} // namespace pdolab
