// Copyright 2026 The gridclear Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef GRIDCLEAR_VALIDATION_H_
#define GRIDCLEAR_VALIDATION_H_

#include <string>
#include <string_view>
#include <vector>

namespace gridclear {

// A single invariant violation. `code` is a stable short identifier such as
// "disconnected" or "negative alpha"; `message` names the offending entity.
struct Finding {
  std::string code;
  std::string message;
};

class ValidationReport {
 public:
  void add(std::string code, std::string message) {
    findings_.push_back({std::move(code), std::move(message)});
  }
  void merge(const ValidationReport& other) {
    findings_.insert(findings_.end(), other.findings_.begin(),
                     other.findings_.end());
  }

  bool ok() const { return findings_.empty(); }
  bool has(std::string_view code) const {
    for (const auto& f : findings_) {
      if (f.code == code) return true;
    }
    return false;
  }
  const std::vector<Finding>& findings() const { return findings_; }

 private:
  std::vector<Finding> findings_;
};

}  // namespace gridclear

#endif  // GRIDCLEAR_VALIDATION_H_
